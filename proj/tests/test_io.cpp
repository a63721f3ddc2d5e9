#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "locality/io.hpp"
#include "locality/report.hpp"

namespace locality {
namespace {

TEST(Trace, TokensInternInFirstAppearanceOrder) {
  std::istringstream in("# header\nA 0x10 B # trailing\n\n0x10 A C\n");
  const auto t = io::read_trace(in);
  EXPECT_EQ(t.pages, (PageSequence{0, 1, 2, 1, 0, 3}));
  EXPECT_EQ(t.tokens.token(1), "0x10");
  EXPECT_EQ(t.tokens.size(), 4u);
}

TEST(Trace, RoundTripPreservesSequence) {
  std::mt19937_64 rng(1);
  for (int iter = 0; iter < 20; ++iter) {
    std::ostringstream src;
    for (int i = 0; i < 100; ++i) src << "page" << rng() % 13 << (i % 7 == 6 ? '\n' : ' ');
    std::istringstream in(src.str());
    const auto t = io::read_trace(in);
    std::ostringstream out;
    io::write_trace(out, t.pages, &t.tokens);
    std::istringstream again(out.str());
    const auto u = io::read_trace(again);
    ASSERT_EQ(u.pages, t.pages);
    for (PageId id = 0; id < t.tokens.size(); ++id) ASSERT_EQ(u.tokens.token(id), t.tokens.token(id));
  }
}

TEST(Trace, MalformedTokenReportsLine) {
  std::istringstream in("a b\nc " + std::string(io::kMaxTokenLength + 1, 'x') + "\n");
  try {
    io::read_trace(in, "t.txt");
    FAIL();
  } catch (const io::FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("t.txt:2"), std::string::npos);
  }
  std::istringstream ctrl("a\n\x01\n");
  EXPECT_THROW(io::read_trace(ctrl), io::FormatError);
}

TEST(FunctionTable, ParseAndWrite) {
  std::istringstream in("# witness\nmultiplicities: 1 1 2 2\ntail: constant  # tail rule\n");
  const auto f = io::read_function_table(in);
  EXPECT_EQ(f, WorkingSetFunction::make({1, 1, 2, 2}, TailRule::ConstantMultiplicity));
  std::ostringstream out;
  io::write_function_table(out, WorkingSetFunction::log2_ceil());
  EXPECT_EQ(out.str(), "multiplicities: 1 1\ntail: geometric 2\n");
  std::istringstream back(out.str());
  EXPECT_EQ(io::read_function_table(back), WorkingSetFunction::log2_ceil());
}

TEST(FunctionTable, DefaultsToUnitTail) {
  std::istringstream in("multiplicities: 1 1 2 3\n");
  EXPECT_EQ(io::read_function_table(in).tail(), TailRule::UnitGrowth);
}

TEST(FunctionTable, Errors) {
  std::istringstream bad_key("multiplicity: 1\n");
  EXPECT_THROW(io::read_function_table(bad_key), io::FormatError);
  std::istringstream bad_tail("multiplicities: 1\ntail: wobbly\n");
  EXPECT_THROW(io::read_function_table(bad_tail), io::FormatError);
  std::istringstream bad_num("multiplicities: 1 x\n");
  EXPECT_THROW(io::read_function_table(bad_num), io::FormatError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(io::read_function_table(empty), io::FormatError);
  std::istringstream decreasing("multiplicities: 1 3 2\n");
  EXPECT_THROW(io::read_function_table(decreasing), FunctionError);
}

TEST(FunctionSpec, Builtins) {
  EXPECT_EQ(io::parse_function_spec("identity"), WorkingSetFunction::identity());
  EXPECT_EQ(io::parse_function_spec("sqrt"), WorkingSetFunction::sqrt_ceil());
  EXPECT_EQ(io::parse_function_spec("log2_ceil"), WorkingSetFunction::log2_ceil());
  EXPECT_THROW(io::parse_function_spec("cubic"), std::invalid_argument);
  EXPECT_THROW(io::parse_function_spec("table:/nonexistent/file.f"), std::runtime_error);
}

TEST(Knapsack, ParseAndWrite) {
  std::istringstream in("# demo\ncapacity 10\n60 5\n50 5\n40 5\n");
  const auto inst = io::read_knapsack(in);
  EXPECT_EQ(inst.capacity, 10);
  ASSERT_EQ(inst.items.size(), 3u);
  EXPECT_EQ(inst.items[1].value, 50);
  std::ostringstream out;
  io::write_knapsack(out, inst);
  EXPECT_EQ(out.str(), "capacity 10\n60 5\n50 5\n40 5\n");
  std::istringstream no_cap("60 5\n");
  EXPECT_THROW(io::read_knapsack(no_cap), io::FormatError);
  std::istringstream negative("capacity 3\n1 -2\n");
  EXPECT_THROW(io::read_knapsack(negative), io::FormatError);
}

TEST(Perceptron, ParseAndRoundTrip) {
  const auto d = perceptron::margin_dataset(3, 10, 0.2, 4);
  std::ostringstream out;
  io::write_perceptron(out, d);
  std::istringstream in(out.str());
  const auto e = io::read_perceptron(in);
  EXPECT_EQ(e.points, d.points);
  EXPECT_EQ(e.labels, d.labels);
  std::istringstream ragged("+1 1 0\n-1 0 1 0\n");
  EXPECT_THROW(io::read_perceptron(ragged), io::FormatError);
  std::istringstream not_unit("+1 2 0\n");
  EXPECT_THROW(io::read_perceptron(not_unit), io::FormatError);
}

TEST(Report, SortedKeysAndRationalStrings) {
  SimulationResult r;
  r.policy_name = "lru";
  r.total_requests = 5;
  r.faults = 3;
  const auto doc = report::document("simulate", {{"k", 4}}, report::to_json(r));
  const std::string text = report::dump(doc);
  EXPECT_LT(text.find("\"command\""), text.find("\"inputs\""));
  EXPECT_LT(text.find("\"inputs\""), text.find("\"results\""));
  EXPECT_NE(text.find("\"fault_rate\": \"3/5\""), std::string::npos);
  EXPECT_NE(text.find("\"schema_version\": \"1\""), std::string::npos);
  EXPECT_EQ(text, report::dump(report::document("simulate", {{"k", 4}}, report::to_json(r))));
}

}  // namespace
}  // namespace locality
