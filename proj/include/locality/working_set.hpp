#pragma once

// Working-set locality model.
//
// A function f bounds the number of distinct pages that may appear in any
// window of n consecutive requests. f is stored through its multiplicities
// m_y = |{n : f(n) = y}| for y = 1..K plus a rule that extends the table
// to every y > K. Storing multiplicities rather than values keeps eval and
// inverse total and makes the block structure of the lower-bound
// construction directly available.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "locality/rational.hpp"

namespace locality {

using PageId = std::uint32_t;
using PageSequence = std::vector<PageId>;

enum class TailRule {
  UnitGrowth,            // m_y = 1 for y > K
  ConstantMultiplicity,  // m_y = m_K for y > K
  Arithmetic,            // m_y = m_K + step * (y - K)
  Geometric,             // m_y = m_K * ratio^(y - K)
};

class FunctionError : public std::invalid_argument {
 public:
  enum class Kind { NotApproximatelyConcave, InvalidHead, InvalidTable, Unreachable, Degenerate };

  FunctionError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class WorkingSetFunction {
 public:
  // Validated constructor: m_1 = 1, all entries positive, table nondecreasing.
  // tail_param is the step (Arithmetic) or ratio (Geometric); ignored otherwise.
  static WorkingSetFunction make(std::vector<std::uint64_t> multiplicities,
                                 TailRule tail = TailRule::UnitGrowth,
                                 std::uint64_t tail_param = 0);

  static WorkingSetFunction identity();
  static WorkingSetFunction sqrt_ceil();  // f(n) = ceil(sqrt(n))
  static WorkingSetFunction log2_ceil();  // f(n) = ceil(1 + log2(n))

  std::uint64_t eval(std::uint64_t n) const;
  // Smallest n with f(n) = y. Throws std::overflow_error past 2^64.
  std::uint64_t inverse(std::uint64_t y) const;
  // m_y for any y >= 1, saturating at UINT64_MAX.
  std::uint64_t multiplicity(std::uint64_t y) const;
  // f(1..count) in one pass.
  std::vector<std::uint64_t> values(std::size_t count) const;

  // Multiplicities nondecreasing over the table and the tail.
  bool approximately_concave() const;

  std::span<const std::uint64_t> table() const { return table_; }
  TailRule tail() const { return tail_; }
  std::uint64_t tail_param() const { return tail_param_; }
  std::string describe() const;

  friend bool operator==(const WorkingSetFunction&, const WorkingSetFunction&) = default;

 private:
  friend WorkingSetFunction normalize(std::span<const std::uint64_t> raw);

  WorkingSetFunction(std::vector<std::uint64_t> table, TailRule tail, std::uint64_t param);

  std::vector<std::uint64_t> table_;
  std::vector<std::uint64_t> prefix_;  // prefix_[i] = m_1 + ... + m_{i+1}
  TailRule tail_;
  std::uint64_t tail_param_;
};

enum class Builtin { Identity, SqrtCeil, Log2Ceil };
WorkingSetFunction builtin_function(Builtin which);

// Closure of an arbitrary window bound given on 1..K:
//   g(n)  = min(n, min_{j >= n} raw(j))
//   f'(n) = min_{m <= n} g(m) + n - m
// Beyond K the result grows by one per step.
std::vector<std::uint64_t> closure(std::span<const std::uint64_t> raw);
// closure() packaged as a function. Throws Degenerate when f'(2) = 1.
// The result obeys f(1)=1, f(2)=2 and unit steps but need not be
// approximately concave.
WorkingSetFunction normalize(std::span<const std::uint64_t> raw);

// (k-1) / (f^{-1}(k+1) - 2); k >= 2.
Rational alpha(const WorkingSetFunction& f, std::uint64_t k);
// k / (f^{-1}(k+1) - 1); k >= 2.
Rational fifo_bound(const WorkingSetFunction& f, std::uint64_t k);

struct Violation {
  std::size_t start = 0;
  std::size_t length = 0;
  std::uint64_t distinct = 0;
  std::uint64_t allowed = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ConformanceReport {
  bool conforms = true;
  std::optional<Violation> first_violation;

  friend bool operator==(const ConformanceReport&, const ConformanceReport&) = default;
};

// Both checkers report the violating window with the smallest length, ties
// broken by smallest start index.
ConformanceReport conforms(std::span<const PageId> sequence, const WorkingSetFunction& f);
// Reference: every window, O(L^2).
ConformanceReport conforms_naive(std::span<const PageId> sequence, const WorkingSetFunction& f);

// g(n) = max distinct pages over windows of length n, n = 1..max_window.
std::vector<std::uint64_t> empirical_profile(std::span<const PageId> sequence,
                                             std::size_t max_window);
// One sliding-window pass per window length, spread across OpenMP threads.
std::vector<std::uint64_t> empirical_profile_parallel(std::span<const PageId> sequence,
                                                      std::size_t max_window);

}  // namespace locality
