#include "locality/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include <omp.h>

namespace locality {

namespace {

struct UpperSpec {
  BoundName name;
  PolicyKind policy;
  Rational bound;
  std::uint64_t slack_faults;
};

std::size_t trial_faults(const WorkingSetFunction& f, std::size_t k, PolicyKind policy,
                         std::size_t num_pages, std::size_t length, std::uint64_t seed) {
  const PageSequence seq = random_conforming(f, num_pages, length, seed);
  return run(policy, CacheConfig::warm_range(k), seq).faults;
}

BoundReport verify_upper(const WorkingSetFunction& f, std::size_t k, const TrialParams& params,
                         Execution exec, const UpperSpec& spec) {
  if (params.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (params.length < f.inverse(k + 1)) {
    throw std::invalid_argument("trial length must be at least f^{-1}(k+1) = " +
                                std::to_string(f.inverse(k + 1)));
  }
  const std::size_t num_pages = params.num_pages == 0 ? k + 1 : params.num_pages;
  std::vector<std::size_t> faults(params.trials, 0);

  if (exec == Execution::Serial) {
    for (std::size_t t = 0; t < params.trials; ++t) {
      faults[t] = trial_faults(f, k, spec.policy, num_pages, params.length,
                               trial_seed(params.seed, t));
    }
  } else {
    const auto trials = static_cast<std::int64_t>(params.trials);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t t = 0; t < trials; ++t) {
      const auto i = static_cast<std::size_t>(t);
      faults[i] = trial_faults(f, k, spec.policy, num_pages, params.length,
                               trial_seed(params.seed, i));
    }
  }

  BoundReport report;
  report.f_description = f.describe();
  report.k = k;
  report.bound = spec.name;
  report.policy = policy_name(spec.policy);
  report.bound_value = spec.bound;
  report.trials = params.trials;
  report.length = params.length;
  report.slack_allowed = Rational(spec.slack_faults, params.length);

  using u128 = unsigned __int128;
  const u128 allowed = static_cast<u128>(spec.bound.num()) * params.length +
                       static_cast<u128>(spec.slack_faults) * spec.bound.den();
  for (std::size_t count : faults) {
    if (static_cast<u128>(count) * spec.bound.den() > allowed) ++report.violations;
    report.max_faults = std::max(report.max_faults, count);
  }
  report.max_observed_rate = Rational(report.max_faults, params.length);
  report.pass = report.violations == 0;
  return report;
}

}  // namespace

std::string bound_name(BoundName name) {
  switch (name) {
    case BoundName::AlphaLru: return "alpha_lru";
    case BoundName::AlphaLowerBound: return "alpha_lower_bound";
    case BoundName::FifoUpper: return "fifo_upper";
  }
  return "unknown";
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  // splitmix64 finalizer over (seed, trial)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BoundReport verify_lru_upper(const WorkingSetFunction& f, std::size_t k, const TrialParams& params,
                             Execution exec) {
  return verify_upper(f, k, params, exec,
                      {BoundName::AlphaLru, PolicyKind::Lru, alpha(f, k), 2 * (k - 1)});
}

BoundReport verify_fifo_upper(const WorkingSetFunction& f, std::size_t k, const TrialParams& params,
                              Execution exec) {
  return verify_upper(f, k, params, exec,
                      {BoundName::FifoUpper, PolicyKind::Fifo, fifo_bound(f, k), 2 * k});
}

BoundReport verify_lower_bound(PolicyKind kind, const WorkingSetFunction& f, std::size_t k,
                               std::size_t repetitions) {
  const AdversaryOutput adv = afg_lower_bound(kind, f, k, repetitions);
  const SimulationResult sim = run(kind, CacheConfig::warm_range(k), adv.sequence);
  const ConformanceReport conf = conforms(adv.sequence, f);

  BoundReport report;
  report.f_description = f.describe();
  report.k = k;
  report.bound = BoundName::AlphaLowerBound;
  report.policy = policy_name(kind);
  report.bound_value = alpha(f, k);
  report.trials = repetitions;
  report.length = sim.total_requests;
  report.max_faults = sim.faults;
  report.max_observed_rate = sim.fault_rate();
  report.slack_allowed = Rational(0, 1);
  report.conforms = conf.conforms;
  const bool exact = report.max_observed_rate == report.bound_value &&
                     sim.faults == adv.predicted_faults &&
                     sim.total_requests == adv.predicted_length;
  report.violations = exact ? 0 : 1;
  report.pass = exact && conf.conforms;
  return report;
}

SeparationReport separation_demo(std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
  const FifoWitness witness = fifo_witness();
  const PageSequence seq = repeat(witness.block, repetitions);
  const CacheConfig config = CacheConfig::cold(witness.k);

  SeparationReport report;
  report.repetitions = repetitions;
  report.alpha = alpha(witness.f, witness.k);
  report.fifo_steady = Rational(5, 8);
  report.transient_slack = Rational(1, repetitions);
  report.lru = run(PolicyKind::Lru, config, seq);
  report.fifo = run(PolicyKind::Fifo, config, seq);
  report.opt = run(PolicyKind::Opt, config, seq);
  report.conforms = conforms(seq, witness.f).conforms;
  report.insufficient_length = repetitions < 10;

  const Rational fifo_rate = report.fifo.fault_rate();
  const Rational lru_rate = report.lru.fault_rate();
  // fifo >= 5/8 - 1/reps, scaled by 8 * reps * total.
  const std::uint64_t total = report.fifo.total_requests;
  const bool fifo_near =
      8 * repetitions * report.fifo.faults + 8 * total >= 5 * repetitions * total;
  report.pass = report.conforms && fifo_near && fifo_rate > report.alpha &&
                report.alpha >= lru_rate && report.opt.faults <= report.lru.faults;
  return report;
}

}  // namespace locality
