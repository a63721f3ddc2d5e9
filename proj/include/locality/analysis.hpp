#pragma once

// Harnesses that hold measured fault counts against the parameterized
// bounds. Upper-bound harnesses run independent trials; the Parallel path
// spreads them over OpenMP threads, the Serial path is the reference.
// Both aggregate in trial order and produce identical reports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locality/adversary.hpp"
#include "locality/rational.hpp"
#include "locality/simulator.hpp"
#include "locality/working_set.hpp"

namespace locality {

enum class Execution { Serial, Parallel };

enum class BoundName { AlphaLru, AlphaLowerBound, FifoUpper };
std::string bound_name(BoundName name);

struct BoundReport {
  std::string f_description;
  std::size_t k = 0;
  BoundName bound = BoundName::AlphaLru;
  std::string policy;
  Rational bound_value;
  std::size_t trials = 0;
  std::size_t length = 0;       // requests per trial
  Rational max_observed_rate;
  std::size_t max_faults = 0;
  Rational slack_allowed;       // additive rate slack: slack faults / length
  std::size_t violations = 0;
  std::optional<bool> conforms;  // lower-bound construction only
  bool pass = false;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

struct TrialParams {
  std::size_t trials = 100;
  std::size_t length = 10'000;
  std::size_t num_pages = 0;  // 0 means k + 1
  std::uint64_t seed = 1;
};

// Seed of trial t; trials never share a generator stream.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

// LRU, warm cache {1..k}: faults <= alpha * length + 2(k-1) on every trial.
BoundReport verify_lru_upper(const WorkingSetFunction& f, std::size_t k, const TrialParams& params,
                             Execution exec = Execution::Parallel);

// FIFO, warm cache {1..k}: faults <= k/(f^{-1}(k+1)-1) * length + 2k.
BoundReport verify_fifo_upper(const WorkingSetFunction& f, std::size_t k, const TrialParams& params,
                              Execution exec = Execution::Parallel);

// Builds the lower-bound construction, replays it independently, and
// requires rate == alpha exactly plus conformance.
BoundReport verify_lower_bound(PolicyKind kind, const WorkingSetFunction& f, std::size_t k,
                               std::size_t repetitions);

struct SeparationReport {
  std::size_t repetitions = 0;
  Rational alpha;              // 3/5
  Rational fifo_steady;        // 5/8
  Rational transient_slack;    // 1/repetitions
  SimulationResult lru;
  SimulationResult fifo;
  SimulationResult opt;
  bool conforms = false;
  bool insufficient_length = false;  // repetitions < 10
  bool pass = false;
};

// LRU, FIFO and OPT on the witness block repeated, cold start, k = 4.
SeparationReport separation_demo(std::size_t repetitions);

}  // namespace locality
