#include "locality/adversary.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace locality {

namespace {

constexpr std::uint64_t kMaxGeneratedLength = 200'000'000;

std::vector<PageId> universe_of(std::size_t k) {
  std::vector<PageId> u(k + 1);
  for (std::size_t i = 0; i <= k; ++i) u[i] = static_cast<PageId>(i + 1);
  return u;
}

// Unbiased draw from [0, n) using the raw engine output, so sequences are
// identical across standard library implementations.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

// Incremental admissibility. Keeps pages by recency (most recent first)
// with their last positions. Appending a page at recency rank r moves every
// more recent page one rank down; the window from such a page's last
// occurrence to the new position then holds one more distinct page than
// before. Less recent pages keep their distinct counts and their windows
// only grow, so they stay within f. A page at rank r is admissible iff the
// shifted constraint holds for every rank below r; a page never seen
// requires it for all ranks.
class ConformingState {
 public:
  ConformingState(const WorkingSetFunction& f, std::size_t num_pages, std::size_t horizon)
      : bound_(f.values(horizon + 1)), last_(num_pages + 1, 0), num_pages_(num_pages) {}

  void push(PageId page) {
    auto it = std::find(recency_.begin(), recency_.end(), page);
    if (it == recency_.end()) {
      recency_.insert(recency_.begin(), page);
    } else {
      std::rotate(recency_.begin(), it, it + 1);
    }
    last_[page] = position_++;
  }

  // Ascending page ids.
  std::vector<PageId> admissible() const {
    std::size_t cut = recency_.size();
    for (std::size_t i = 0; i < recency_.size(); ++i) {
      const std::size_t len = position_ - last_[recency_[i]] + 1;
      if (i + 2 > bound_[len - 1]) {
        cut = i;
        break;
      }
    }
    std::vector<PageId> out;
    if (cut < recency_.size()) {
      out.assign(recency_.begin(), recency_.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
    } else {
      out.reserve(num_pages_);
      for (std::size_t p = 1; p <= num_pages_; ++p) out.push_back(static_cast<PageId>(p));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::uint64_t> bound_;
  std::vector<std::size_t> last_;
  std::vector<PageId> recency_;
  std::size_t position_ = 0;
  std::size_t num_pages_;
};

}  // namespace

AdversaryOutput afg_lower_bound(PolicyKind kind, const WorkingSetFunction& f, std::size_t k,
                                std::size_t repetitions) {
  if (k < 2) throw AdversaryError(AdversaryError::Kind::InvalidArgument, "lower bound needs k >= 2");
  if (repetitions == 0) {
    throw AdversaryError(AdversaryError::Kind::InvalidArgument, "repetitions must be >= 1");
  }
  if (f.eval(2) != 2) {
    throw AdversaryError(AdversaryError::Kind::DegenerateFunction, "f(2) = 1: nothing to construct");
  }
  const std::uint64_t per_block = f.inverse(k + 1) - 2;
  if (per_block > kMaxGeneratedLength / repetitions) {
    throw AdversaryError(AdversaryError::Kind::InvalidArgument,
                         "construction length " + std::to_string(per_block) + " x " +
                             std::to_string(repetitions) + " is too long to materialize");
  }

  auto policy = new_policy(kind, CacheConfig::warm_range(k));
  AdversaryOutput out;
  out.universe = universe_of(k);
  out.target_policy = policy->name();
  out.sequence.reserve(per_block * repetitions);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    for (std::size_t j = 1; j < k; ++j) {
      const PageId page = missing_page(*policy, out.universe);
      const std::uint64_t copies = f.multiplicity(j + 1);
      for (std::uint64_t c = 0; c < copies; ++c) {
        out.sequence.push_back(page);
        policy->on_request(page);
      }
    }
  }
  out.predicted_faults = static_cast<std::uint64_t>(repetitions) * (k - 1);
  out.predicted_length = static_cast<std::uint64_t>(repetitions) * per_block;
  return out;
}

AdversaryOutput always_miss(PolicyKind kind, std::size_t k, std::size_t length) {
  if (k == 0 || length == 0) {
    throw AdversaryError(AdversaryError::Kind::InvalidArgument, "k and length must be >= 1");
  }
  auto policy = new_policy(kind, CacheConfig::warm_range(k));
  AdversaryOutput out;
  out.universe = universe_of(k);
  out.target_policy = policy->name();
  out.sequence.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const PageId page = missing_page(*policy, out.universe);
    out.sequence.push_back(page);
    policy->on_request(page);
  }
  out.predicted_faults = length;
  out.predicted_length = length;
  return out;
}

FifoWitness fifo_witness() {
  // f = 1,2,3,3,4,4,5,5,6,6,...
  return {WorkingSetFunction::make({1, 1, 2, 2}, TailRule::ConstantMultiplicity), 4,
          {1, 0, 2, 0, 3, 0, 4, 0}};
}

PageSequence repeat(const PageSequence& block, std::size_t times) {
  PageSequence out;
  out.reserve(block.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), block.begin(), block.end());
  return out;
}

PageSequence random_conforming(const WorkingSetFunction& f, std::size_t num_pages,
                               std::size_t length, std::uint64_t seed) {
  if (num_pages == 0 || length == 0) {
    throw AdversaryError(AdversaryError::Kind::InvalidArgument, "num_pages and length must be >= 1");
  }
  std::mt19937_64 rng(seed);
  ConformingState state(f, num_pages, length);
  PageSequence out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const std::vector<PageId> candidates = state.admissible();
    if (candidates.empty()) {
      throw AdversaryError(AdversaryError::Kind::Stuck, "no admissible page at position " +
                                                            std::to_string(i));
    }
    const PageId page = candidates[draw_index(rng, candidates.size())];
    out.push_back(page);
    state.push(page);
  }
  return out;
}

std::vector<PageId> admissible_next(const PageSequence& prefix, const WorkingSetFunction& f,
                                    std::size_t num_pages) {
  ConformingState state(f, num_pages, prefix.size() + 1);
  for (PageId p : prefix) {
    if (p == 0 || p > num_pages) throw std::out_of_range("prefix page outside 1..num_pages");
    state.push(p);
  }
  return state.admissible();
}

}  // namespace locality
