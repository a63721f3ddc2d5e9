// Serial reference kernels against their OpenMP counterparts, and the
// all-windows conformance checker against the recency-stack one.

#include <benchmark/benchmark.h>

#include "locality/adversary.hpp"
#include "locality/analysis.hpp"

namespace {

using namespace locality;

void BM_VerifyLruUpper(benchmark::State& state) {
  const auto exec = state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
  const auto f = WorkingSetFunction::sqrt_ceil();
  const TrialParams params{.trials = 32, .length = 20'000, .num_pages = 0, .seed = 1};
  for (auto _ : state) benchmark::DoNotOptimize(verify_lru_upper(f, 16, params, exec));
  state.SetLabel(exec == Execution::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_VerifyLruUpper)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Profile(benchmark::State& state) {
  const bool parallel = state.range(0) == 1;
  const auto seq = random_conforming(WorkingSetFunction::sqrt_ceil(), 64, 50'000, 3);
  const std::size_t window = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? empirical_profile_parallel(seq, window) : empirical_profile(seq, window));
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_Profile)->ArgsProduct({{0, 1}, {64, 512}})->Unit(benchmark::kMillisecond);

void BM_Conforms(benchmark::State& state) {
  const bool naive = state.range(0) == 0;
  const auto f = WorkingSetFunction::log2_ceil();
  const auto seq = random_conforming(f, 12, static_cast<std::size_t>(state.range(1)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(naive ? conforms_naive(seq, f) : conforms(seq, f));
  state.SetLabel(naive ? "naive" : "recency-stack");
}
BENCHMARK(BM_Conforms)->ArgsProduct({{0, 1}, {500, 2000}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
