#pragma once

// Input constructions against deterministic online policies. The
// lower-bound generators simulate the target policy in lockstep because
// every block starts with whichever page the policy is currently missing.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "locality/policies.hpp"
#include "locality/working_set.hpp"

namespace locality {

class AdversaryError : public std::runtime_error {
 public:
  enum class Kind { DegenerateFunction, Stuck, InvalidArgument };

  AdversaryError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct AdversaryOutput {
  PageSequence sequence;
  std::vector<PageId> universe;  // 1..k+1
  std::uint64_t predicted_faults = 0;
  std::uint64_t predicted_length = 0;
  std::string target_policy;
};

// Warm cache {1..k}; per repetition, k-1 blocks where block j repeats the
// currently missing page m_{j+1} times.
AdversaryOutput afg_lower_bound(PolicyKind kind, const WorkingSetFunction& f, std::size_t k,
                                std::size_t repetitions = 1);

// Warm cache {1..k}; every request is the currently missing page.
AdversaryOutput always_miss(PolicyKind kind, std::size_t k, std::size_t length);

struct FifoWitness {
  WorkingSetFunction f;
  std::size_t k = 4;
  PageSequence block;  // 1 0 2 0 3 0 4 0
};

FifoWitness fifo_witness();

PageSequence repeat(const PageSequence& block, std::size_t times);

// Pages 1..num_pages. Each step samples uniformly among pages whose
// addition keeps every window ending at the new position within f.
PageSequence random_conforming(const WorkingSetFunction& f, std::size_t num_pages,
                               std::size_t length, std::uint64_t seed);

// Pages admissible as the next request after `prefix` (over 1..num_pages),
// ascending. `prefix` must itself conform to f.
std::vector<PageId> admissible_next(const PageSequence& prefix, const WorkingSetFunction& f,
                                    std::size_t num_pages);

}  // namespace locality
