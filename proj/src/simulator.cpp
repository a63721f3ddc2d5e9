#include "locality/simulator.hpp"

namespace locality {

SimulationResult replay(Policy& policy, std::span<const PageId> sequence, RunOptions options) {
  SimulationResult result;
  result.policy_name = policy.name();
  result.total_requests = sequence.size();
  if (options.detail) {
    result.fault_indices.emplace();
    result.eviction_log.emplace();
  }
  std::size_t steady_faults = 0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const RequestOutcome out = policy.on_request(sequence[i]);
    if (out.hit) continue;
    ++result.faults;
    if (i >= options.warmup) ++steady_faults;
    if (options.detail) {
      result.fault_indices->push_back(i);
      if (out.evicted) result.eviction_log->push_back({i, *out.evicted});
    }
  }
  if (options.warmup > 0) {
    const std::size_t counted =
        sequence.size() > options.warmup ? sequence.size() - options.warmup : 0;
    result.steady = std::pair{steady_faults, counted};
  }
  return result;
}

SimulationResult run(PolicyKind kind, const CacheConfig& config, std::span<const PageId> sequence,
                     RunOptions options) {
  if (sequence.empty()) throw std::invalid_argument("cannot simulate an empty sequence");
  if (kind == PolicyKind::Opt) {
    SimulationResult result = belady_run(sequence, config, options.detail);
    if (options.warmup > 0) {
      std::size_t steady_faults = 0;
      // Fault positions are needed for the steady split; recompute with detail.
      const SimulationResult full = options.detail ? result : belady_run(sequence, config, true);
      for (std::size_t i : *full.fault_indices) steady_faults += i >= options.warmup ? 1 : 0;
      const std::size_t counted =
          sequence.size() > options.warmup ? sequence.size() - options.warmup : 0;
      result.steady = std::pair{steady_faults, counted};
    }
    return result;
  }
  auto policy = new_policy(kind, config);
  return replay(*policy, sequence, options);
}

std::vector<SimulationResult> compare(std::span<const PolicyKind> kinds, const CacheConfig& config,
                                      std::span<const PageId> sequence, bool include_opt,
                                      RunOptions options) {
  std::vector<SimulationResult> out;
  out.reserve(kinds.size() + (include_opt ? 1 : 0));
  bool opt_listed = false;
  for (PolicyKind kind : kinds) {
    opt_listed = opt_listed || kind == PolicyKind::Opt;
    out.push_back(run(kind, config, sequence, options));
  }
  if (include_opt && !opt_listed) out.push_back(run(PolicyKind::Opt, config, sequence, options));
  return out;
}

}  // namespace locality
