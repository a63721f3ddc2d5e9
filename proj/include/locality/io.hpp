#pragma once

// Text formats. '#' starts a comment to end of line in every format.
//
//   trace      whitespace-separated page tokens
//   f-table    "multiplicities: m_1 m_2 ... m_K" then
//              "tail: unit|constant|arithmetic STEP|geometric RATIO"
//   knapsack   "capacity C" then one "value size" pair per line
//   perceptron one "b x_1 ... x_d" row per point

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "locality/knapsack.hpp"
#include "locality/perceptron.hpp"
#include "locality/working_set.hpp"

namespace locality::io {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::size_t kMaxTokenLength = 256;

// Page tokens interned to dense ids in first-appearance order.
class TokenTable {
 public:
  PageId intern(const std::string& token);
  const std::string& token(PageId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, PageId> ids_;
};

struct Trace {
  TokenTable tokens;
  PageSequence pages;
};

// Tokens are printable ASCII without spaces, at most kMaxTokenLength bytes.
Trace read_trace(std::istream& in, const std::string& source = "<trace>");
Trace read_trace_file(const std::string& path);
// Interns into an existing table (for tokens shared with other inputs).
PageSequence read_trace(std::istream& in, TokenTable& tokens, const std::string& source);

void write_trace(std::ostream& out, const PageSequence& pages, const TokenTable* tokens = nullptr);

WorkingSetFunction read_function_table(std::istream& in, const std::string& source = "<f-table>");
void write_function_table(std::ostream& out, const WorkingSetFunction& f);

// "identity", "sqrt" / "sqrt_ceil", "log2" / "log2_ceil", or "table:PATH".
WorkingSetFunction parse_function_spec(const std::string& spec);

knapsack::Instance read_knapsack(std::istream& in, const std::string& source = "<knapsack>");
void write_knapsack(std::ostream& out, const knapsack::Instance& instance);

perceptron::Dataset read_perceptron(std::istream& in, const std::string& source = "<dataset>");
void write_perceptron(std::ostream& out, const perceptron::Dataset& data);

}  // namespace locality::io
