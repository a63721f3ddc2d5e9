#include "locality/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace locality::io {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string word;
  while (is >> word) out.push_back(word);
  return out;
}

bool valid_token(const std::string& token) {
  for (unsigned char c : token) {
    if (c < 0x21 || c == 0x7f) return false;
  }
  return true;
}

template <typename T>
T parse_number(const std::string& text, const std::string& source, std::size_t line,
               const char* what) {
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(source, line, std::string("expected ") + what + ", got '" + text + "'");
  }
  return value;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

}  // namespace

PageId TokenTable::intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<PageId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

PageSequence read_trace(std::istream& in, TokenTable& tokens, const std::string& source) {
  PageSequence pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (const std::string& token : split_ws(strip_comment(line))) {
      if (token.size() > kMaxTokenLength) {
        throw FormatError(source, line_no,
                          "page token longer than " + std::to_string(kMaxTokenLength) + " bytes");
      }
      if (!valid_token(token)) throw FormatError(source, line_no, "page token has control characters");
      pages.push_back(tokens.intern(token));
    }
  }
  return pages;
}

Trace read_trace(std::istream& in, const std::string& source) {
  Trace trace;
  trace.pages = read_trace(in, trace.tokens, source);
  return trace;
}

Trace read_trace_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_trace(in, path);
}

void write_trace(std::ostream& out, const PageSequence& pages, const TokenTable* tokens) {
  constexpr std::size_t kPerLine = 16;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (tokens) {
      out << tokens->token(pages[i]);
    } else {
      out << pages[i];
    }
    out << ((i + 1) % kPerLine == 0 || i + 1 == pages.size() ? '\n' : ' ');
  }
}

WorkingSetFunction read_function_table(std::istream& in, const std::string& source) {
  std::vector<std::uint64_t> table;
  bool have_table = false;
  TailRule tail = TailRule::UnitGrowth;
  std::uint64_t param = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (split_ws(body).empty()) continue;
    const auto colon = body.find(':');
    if (colon == std::string::npos) throw FormatError(source, line_no, "expected 'key: value'");
    const auto key_words = split_ws(body.substr(0, colon));
    const auto values = split_ws(body.substr(colon + 1));
    const std::string key = key_words.size() == 1 ? key_words[0] : "";
    if (key == "multiplicities") {
      if (values.empty()) throw FormatError(source, line_no, "multiplicity list is empty");
      table.clear();
      for (const auto& v : values) {
        table.push_back(parse_number<std::uint64_t>(v, source, line_no, "a positive integer"));
      }
      have_table = true;
    } else if (key == "tail") {
      if (values.empty()) throw FormatError(source, line_no, "tail rule missing");
      const std::string& rule = values[0];
      const bool takes_param = rule == "arithmetic" || rule == "geometric";
      if (values.size() != (takes_param ? 2u : 1u)) {
        throw FormatError(source, line_no, "tail '" + rule + "' takes " +
                                               (takes_param ? "one parameter" : "no parameters"));
      }
      if (rule == "unit") {
        tail = TailRule::UnitGrowth;
      } else if (rule == "constant") {
        tail = TailRule::ConstantMultiplicity;
      } else if (takes_param) {
        tail = rule == "arithmetic" ? TailRule::Arithmetic : TailRule::Geometric;
        param = parse_number<std::uint64_t>(values[1], source, line_no, "an integer parameter");
      } else {
        throw FormatError(source, line_no, "unknown tail rule '" + rule + "'");
      }
    } else {
      throw FormatError(source, line_no, "unknown key '" + body.substr(0, colon) + "'");
    }
  }
  if (!have_table) throw FormatError(source, line_no, "no 'multiplicities:' line");
  return WorkingSetFunction::make(std::move(table), tail, param);
}

void write_function_table(std::ostream& out, const WorkingSetFunction& f) {
  out << "multiplicities:";
  for (std::uint64_t m : f.table()) out << ' ' << m;
  out << "\ntail: ";
  switch (f.tail()) {
    case TailRule::UnitGrowth: out << "unit"; break;
    case TailRule::ConstantMultiplicity: out << "constant"; break;
    case TailRule::Arithmetic: out << "arithmetic " << f.tail_param(); break;
    case TailRule::Geometric: out << "geometric " << f.tail_param(); break;
  }
  out << '\n';
}

WorkingSetFunction parse_function_spec(const std::string& spec) {
  if (spec == "identity") return WorkingSetFunction::identity();
  if (spec == "sqrt" || spec == "sqrt_ceil") return WorkingSetFunction::sqrt_ceil();
  if (spec == "log2" || spec == "log2_ceil") return WorkingSetFunction::log2_ceil();
  constexpr std::string_view kTable = "table:";
  if (spec.starts_with(kTable)) {
    const std::string path = spec.substr(kTable.size());
    auto in = open_or_throw(path);
    return read_function_table(in, path);
  }
  throw std::invalid_argument("unknown function '" + spec +
                              "' (expected identity, sqrt, log2 or table:PATH)");
}

knapsack::Instance read_knapsack(std::istream& in, const std::string& source) {
  knapsack::Instance instance;
  bool have_capacity = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto words = split_ws(strip_comment(line));
    if (words.empty()) continue;
    if (!have_capacity) {
      if (words.size() != 2 || words[0] != "capacity") {
        throw FormatError(source, line_no, "first line must be 'capacity C'");
      }
      instance.capacity = parse_number<double>(words[1], source, line_no, "a capacity");
      have_capacity = true;
      continue;
    }
    if (words.size() != 2) throw FormatError(source, line_no, "expected 'value size'");
    instance.items.push_back({parse_number<double>(words[0], source, line_no, "a value"),
                              parse_number<double>(words[1], source, line_no, "a size")});
  }
  if (!have_capacity) throw FormatError(source, line_no, "missing 'capacity C' line");
  try {
    instance.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(source, line_no, e.what());
  }
  return instance;
}

void write_knapsack(std::ostream& out, const knapsack::Instance& instance) {
  out << "capacity " << format_double(instance.capacity) << '\n';
  for (const auto& it : instance.items) {
    out << format_double(it.value) << ' ' << format_double(it.size) << '\n';
  }
}

perceptron::Dataset read_perceptron(std::istream& in, const std::string& source) {
  perceptron::Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto words = split_ws(strip_comment(line));
    if (words.empty()) continue;
    if (words.size() < 2) throw FormatError(source, line_no, "expected 'b x_1 ... x_d'");
    const int label = parse_number<int>(words[0], source, line_no, "a label of -1 or +1");
    if (label != 1 && label != -1) throw FormatError(source, line_no, "label must be -1 or +1");
    perceptron::Vector x;
    for (std::size_t i = 1; i < words.size(); ++i) {
      x.push_back(parse_number<double>(words[i], source, line_no, "a coordinate"));
    }
    if (data.dim == 0) data.dim = x.size();
    if (x.size() != data.dim) {
      throw FormatError(source, line_no, "row has " + std::to_string(x.size()) +
                                             " coordinates, expected " + std::to_string(data.dim));
    }
    data.labels.push_back(label);
    data.points.push_back(std::move(x));
  }
  try {
    data.validate();
  } catch (const perceptron::DatasetError& e) {
    throw FormatError(source, line_no, e.what());
  }
  return data;
}

void write_perceptron(std::ostream& out, const perceptron::Dataset& data) {
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    out << (data.labels[i] > 0 ? "+1" : "-1");
    for (double x : data.points[i]) out << ' ' << format_double(x);
    out << '\n';
  }
}

}  // namespace locality::io
