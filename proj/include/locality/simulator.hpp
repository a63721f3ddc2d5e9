#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locality/policies.hpp"
#include "locality/rational.hpp"

namespace locality {

struct Eviction {
  std::size_t index = 0;
  PageId page = 0;

  friend bool operator==(const Eviction&, const Eviction&) = default;
};

struct SimulationResult {
  std::string policy_name;
  std::size_t total_requests = 0;
  std::size_t faults = 0;
  std::optional<std::vector<std::size_t>> fault_indices;
  std::optional<std::vector<Eviction>> eviction_log;
  // Counts restricted to requests at index >= warmup, when a warmup was set.
  std::optional<std::pair<std::size_t, std::size_t>> steady;  // (faults, requests)

  Rational fault_rate() const { return Rational(faults, total_requests); }
  std::optional<Rational> steady_rate() const {
    if (!steady || steady->second == 0) return std::nullopt;
    return Rational(steady->first, steady->second);
  }

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

struct RunOptions {
  bool detail = false;
  std::size_t warmup = 0;
};

SimulationResult run(PolicyKind kind, const CacheConfig& config, std::span<const PageId> sequence,
                     RunOptions options = {});

// Replays one online policy; used by run() and by callers holding a handle.
SimulationResult replay(Policy& policy, std::span<const PageId> sequence, RunOptions options = {});

std::vector<SimulationResult> compare(std::span<const PolicyKind> kinds, const CacheConfig& config,
                                      std::span<const PageId> sequence, bool include_opt,
                                      RunOptions options = {});

}  // namespace locality
