#include "locality/working_set.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <omp.h>

namespace locality {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("working-set value exceeds 2^64");
  return out;
}

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("working-set value exceeds 2^64");
  return out;
}

std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  return __builtin_mul_overflow(a, b, &out) ? kSaturated : out;
}

std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  return __builtin_add_overflow(a, b, &out) ? kSaturated : out;
}

// Pages relabelled 0..P-1 in first-appearance order.
std::vector<std::uint32_t> densify(std::span<const PageId> sequence, std::size_t& distinct) {
  std::unordered_map<PageId, std::uint32_t> ids;
  std::vector<std::uint32_t> out;
  out.reserve(sequence.size());
  for (PageId p : sequence) {
    auto [it, inserted] = ids.try_emplace(p, static_cast<std::uint32_t>(ids.size()));
    out.push_back(it->second);
  }
  distinct = ids.size();
  return out;
}

bool lexicographically_before(const Violation& a, const std::optional<Violation>& best) {
  if (!best) return true;
  if (a.length != best->length) return a.length < best->length;
  return a.start < best->start;
}

}  // namespace

WorkingSetFunction::WorkingSetFunction(std::vector<std::uint64_t> table, TailRule tail,
                                       std::uint64_t param)
    : table_(std::move(table)), tail_(tail), tail_param_(param) {
  prefix_.reserve(table_.size());
  std::uint64_t sum = 0;
  for (std::uint64_t m : table_) {
    sum = add_checked(sum, m);
    prefix_.push_back(sum);
  }
  if (tail_ != TailRule::Arithmetic && tail_ != TailRule::Geometric) tail_param_ = 0;
}

WorkingSetFunction WorkingSetFunction::make(std::vector<std::uint64_t> multiplicities,
                                            TailRule tail, std::uint64_t tail_param) {
  if (multiplicities.empty()) {
    throw FunctionError(FunctionError::Kind::InvalidTable, "multiplicity table is empty");
  }
  if (multiplicities.front() != 1) {
    throw FunctionError(FunctionError::Kind::InvalidHead,
                        "m_1 must be 1 (f(1) = 1 and f(2) = 2)");
  }
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    if (multiplicities[i] == 0) {
      throw FunctionError(FunctionError::Kind::InvalidTable,
                          "multiplicity m_" + std::to_string(i + 1) + " is zero");
    }
    if (i > 0 && multiplicities[i] < multiplicities[i - 1]) {
      throw FunctionError(FunctionError::Kind::NotApproximatelyConcave,
                          "multiplicities decrease at m_" + std::to_string(i + 1));
    }
  }
  if (tail == TailRule::Geometric && tail_param == 0) {
    throw FunctionError(FunctionError::Kind::InvalidTable, "geometric tail needs ratio >= 1");
  }
  return WorkingSetFunction(std::move(multiplicities), tail, tail_param);
}

WorkingSetFunction WorkingSetFunction::identity() { return make({1}, TailRule::UnitGrowth); }

// ceil(sqrt(n)) = y on n in ((y-1)^2, y^2]: m_y = 2y - 1.
WorkingSetFunction WorkingSetFunction::sqrt_ceil() { return make({1, 3}, TailRule::Arithmetic, 2); }

// ceil(1 + log2 n) = y on n in (2^(y-2), 2^(y-1)]: m_y = 2^(y-2) for y >= 2.
WorkingSetFunction WorkingSetFunction::log2_ceil() { return make({1, 1}, TailRule::Geometric, 2); }

WorkingSetFunction builtin_function(Builtin which) {
  switch (which) {
    case Builtin::Identity: return WorkingSetFunction::identity();
    case Builtin::SqrtCeil: return WorkingSetFunction::sqrt_ceil();
    case Builtin::Log2Ceil: return WorkingSetFunction::log2_ceil();
  }
  throw std::invalid_argument("unknown builtin");
}

std::uint64_t WorkingSetFunction::multiplicity(std::uint64_t y) const {
  if (y == 0) throw std::invalid_argument("multiplicity index starts at 1");
  const std::uint64_t k = table_.size();
  if (y <= k) return table_[y - 1];
  const std::uint64_t last = table_.back();
  const std::uint64_t steps = y - k;
  switch (tail_) {
    case TailRule::UnitGrowth: return 1;
    case TailRule::ConstantMultiplicity: return last;
    case TailRule::Arithmetic: return add_saturating(last, mul_saturating(tail_param_, steps));
    case TailRule::Geometric: {
      std::uint64_t m = last;
      for (std::uint64_t i = 0; i < steps && m != kSaturated; ++i) m = mul_saturating(m, tail_param_);
      return m;
    }
  }
  return 1;
}

std::uint64_t WorkingSetFunction::inverse(std::uint64_t y) const {
  if (y == 0) throw std::invalid_argument("inverse is defined for y >= 1");
  const std::uint64_t k = table_.size();
  if (y <= k + 1) return y == 1 ? 1 : add_checked(prefix_[y - 2], 1);

  // Sum of the tail multiplicities m_{K+1} .. m_{y-1}.
  const std::uint64_t count = y - 1 - k;
  const std::uint64_t last = table_.back();
  std::uint64_t tail_sum = 0;
  switch (tail_) {
    case TailRule::UnitGrowth: tail_sum = count; break;
    case TailRule::ConstantMultiplicity: tail_sum = mul_checked(last, count); break;
    case TailRule::Arithmetic: {
      // sum_{t=1}^{count} (last + step t) = count*last + step*count*(count+1)/2
      std::uint64_t tri = count % 2 == 0 ? mul_checked(count / 2, add_checked(count, 1))
                                         : mul_checked(count, add_checked(count, 1) / 2);
      tail_sum = add_checked(mul_checked(last, count), mul_checked(tail_param_, tri));
      break;
    }
    case TailRule::Geometric: {
      if (tail_param_ == 1) {
        tail_sum = mul_checked(last, count);
        break;
      }
      std::uint64_t m = last;
      for (std::uint64_t i = 0; i < count; ++i) {
        m = mul_checked(m, tail_param_);
        tail_sum = add_checked(tail_sum, m);
      }
      break;
    }
  }
  return add_checked(add_checked(prefix_.back(), tail_sum), 1);
}

std::uint64_t WorkingSetFunction::eval(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("eval is defined for n >= 1");
  if (n <= prefix_.back()) {
    auto it = std::lower_bound(prefix_.begin(), prefix_.end(), n);
    return static_cast<std::uint64_t>(it - prefix_.begin()) + 1;
  }
  const std::uint64_t k = table_.size();
  const std::uint64_t rest = n - prefix_.back();
  const std::uint64_t last = table_.back();
  const bool constant = tail_ == TailRule::ConstantMultiplicity ||
                        (tail_ == TailRule::Arithmetic && tail_param_ == 0) ||
                        (tail_ == TailRule::Geometric && tail_param_ == 1);
  if (tail_ == TailRule::UnitGrowth) return k + rest;
  if (constant) return k + (rest + last - 1) / last;

  std::uint64_t y = k;
  std::uint64_t remaining = rest;
  while (true) {
    ++y;
    const std::uint64_t m = multiplicity(y);
    if (remaining <= m) return y;
    remaining -= m;
  }
}

std::vector<std::uint64_t> WorkingSetFunction::values(std::size_t count) const {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::uint64_t y = 1;
  std::uint64_t left = multiplicity(1);
  for (std::size_t n = 1; n <= count; ++n) {
    if (left == 0) {
      ++y;
      left = multiplicity(y);
    }
    out.push_back(y);
    --left;
  }
  return out;
}

bool WorkingSetFunction::approximately_concave() const {
  if (!std::is_sorted(table_.begin(), table_.end())) return false;
  if (tail_ == TailRule::UnitGrowth) return table_.back() == 1;
  return true;
}

std::string WorkingSetFunction::describe() const {
  if (*this == identity()) return "identity";
  if (*this == sqrt_ceil()) return "sqrt_ceil";
  if (*this == log2_ceil()) return "log2_ceil";
  std::ostringstream os;
  os << "m=[";
  for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
  os << "] tail=";
  switch (tail_) {
    case TailRule::UnitGrowth: os << "unit"; break;
    case TailRule::ConstantMultiplicity: os << "constant"; break;
    case TailRule::Arithmetic: os << "arithmetic " << tail_param_; break;
    case TailRule::Geometric: os << "geometric " << tail_param_; break;
  }
  return os.str();
}

std::vector<std::uint64_t> closure(std::span<const std::uint64_t> raw) {
  if (raw.empty()) throw FunctionError(FunctionError::Kind::InvalidTable, "raw table is empty");
  for (std::uint64_t v : raw) {
    if (v == 0) throw FunctionError(FunctionError::Kind::InvalidTable, "raw table entries must be positive");
  }
  const std::size_t k = raw.size();
  std::vector<std::uint64_t> capped(k);
  std::uint64_t suffix_min = kSaturated;
  for (std::size_t i = k; i-- > 0;) {
    suffix_min = std::min(suffix_min, raw[i]);
    capped[i] = std::min<std::uint64_t>(i + 1, suffix_min);
  }
  std::vector<std::uint64_t> out(k);
  out[0] = capped[0];
  for (std::size_t i = 1; i < k; ++i) out[i] = std::min(out[i - 1] + 1, capped[i]);
  return out;
}

WorkingSetFunction normalize(std::span<const std::uint64_t> raw) {
  const std::vector<std::uint64_t> vals = closure(raw);
  if (vals.size() >= 2 && vals[1] == 1) {
    throw FunctionError(FunctionError::Kind::Degenerate,
                        "normalized f has f(2) = 1; only constant sequences conform");
  }
  std::vector<std::uint64_t> table;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i == 0 || vals[i] != vals[i - 1]) {
      table.push_back(1);
    } else {
      ++table.back();
    }
  }
  return WorkingSetFunction(std::move(table), TailRule::UnitGrowth, 0);
}

Rational alpha(const WorkingSetFunction& f, std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("alpha needs cache size k >= 2");
  return Rational(k - 1, f.inverse(k + 1) - 2);
}

Rational fifo_bound(const WorkingSetFunction& f, std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("fifo bound needs cache size k >= 2");
  return Rational(k, f.inverse(k + 1) - 1);
}

ConformanceReport conforms_naive(std::span<const PageId> sequence, const WorkingSetFunction& f) {
  std::size_t distinct_pages = 0;
  const auto dense = densify(sequence, distinct_pages);
  const auto bound = f.values(sequence.size());
  std::optional<Violation> best;
  std::vector<std::uint32_t> seen(distinct_pages, 0);
  std::uint32_t stamp = 0;
  for (std::size_t start = 0; start < dense.size(); ++start) {
    ++stamp;
    std::uint64_t d = 0;
    for (std::size_t end = start; end < dense.size(); ++end) {
      if (seen[dense[end]] != stamp) {
        seen[dense[end]] = stamp;
        ++d;
      }
      const std::size_t len = end - start + 1;
      if (d > bound[len - 1]) {
        Violation v{start, len, d, bound[len - 1]};
        if (lexicographically_before(v, best)) best = v;
        break;  // longer windows from this start are never lexicographically smaller
      }
    }
  }
  return {!best.has_value(), best};
}

ConformanceReport conforms(std::span<const PageId> sequence, const WorkingSetFunction& f) {
  std::size_t distinct_pages = 0;
  const auto dense = densify(sequence, distinct_pages);
  const auto bound = f.values(sequence.size());
  std::vector<std::size_t> last(distinct_pages, 0);
  std::vector<std::uint32_t> recency;  // most recent first
  recency.reserve(distinct_pages);
  std::optional<Violation> best;

  for (std::size_t j = 0; j < dense.size(); ++j) {
    const std::uint32_t page = dense[j];
    auto it = std::find(recency.begin(), recency.end(), page);
    if (it == recency.end()) {
      recency.insert(recency.begin(), page);
    } else {
      std::rotate(recency.begin(), it, it + 1);
    }
    last[page] = j;
    // The d-th most recent page's last occurrence starts the shortest window
    // ending at j that holds d distinct pages.
    for (std::size_t d = 1; d <= recency.size(); ++d) {
      const std::size_t start = last[recency[d - 1]];
      const std::size_t len = j - start + 1;
      if (best && len > best->length) break;
      if (d > bound[len - 1]) {
        Violation v{start, len, d, bound[len - 1]};
        if (lexicographically_before(v, best)) best = v;
      }
    }
  }
  return {!best.has_value(), best};
}

std::vector<std::uint64_t> empirical_profile(std::span<const PageId> sequence,
                                             std::size_t max_window) {
  if (max_window == 0 || max_window > sequence.size()) {
    throw std::invalid_argument("max_window must be in 1..|sequence|");
  }
  std::size_t distinct_pages = 0;
  const auto dense = densify(sequence, distinct_pages);
  // shortest[d-1]: shortest window anywhere holding d distinct pages.
  std::vector<std::size_t> shortest(distinct_pages, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> last(distinct_pages, 0);
  std::vector<std::uint32_t> recency;
  recency.reserve(distinct_pages);
  for (std::size_t j = 0; j < dense.size(); ++j) {
    const std::uint32_t page = dense[j];
    auto it = std::find(recency.begin(), recency.end(), page);
    if (it == recency.end()) {
      recency.insert(recency.begin(), page);
    } else {
      std::rotate(recency.begin(), it, it + 1);
    }
    last[page] = j;
    for (std::size_t d = 1; d <= recency.size(); ++d) {
      shortest[d - 1] = std::min(shortest[d - 1], j - last[recency[d - 1]] + 1);
    }
  }
  std::vector<std::uint64_t> profile(max_window, 0);
  for (std::size_t n = 1; n <= max_window; ++n) {
    // shortest is nondecreasing in d.
    profile[n - 1] = static_cast<std::uint64_t>(
        std::upper_bound(shortest.begin(), shortest.end(), n) - shortest.begin());
  }
  return profile;
}

std::vector<std::uint64_t> empirical_profile_parallel(std::span<const PageId> sequence,
                                                      std::size_t max_window) {
  if (max_window == 0 || max_window > sequence.size()) {
    throw std::invalid_argument("max_window must be in 1..|sequence|");
  }
  std::size_t distinct_pages = 0;
  const auto dense = densify(sequence, distinct_pages);
  std::vector<std::uint64_t> profile(max_window, 0);
  const auto windows = static_cast<std::int64_t>(max_window);

#pragma omp parallel
  {
    std::vector<std::uint32_t> counts(distinct_pages, 0);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t w = 1; w <= windows; ++w) {
      const auto len = static_cast<std::size_t>(w);
      std::fill(counts.begin(), counts.end(), 0);
      std::uint64_t d = 0;
      std::uint64_t best = 0;
      for (std::size_t i = 0; i < dense.size(); ++i) {
        if (counts[dense[i]]++ == 0) ++d;
        if (i >= len && --counts[dense[i - len]] == 0) --d;
        if (i + 1 >= len) best = std::max(best, d);
      }
      profile[len - 1] = best;
    }
  }
  return profile;
}

}  // namespace locality
