#include <benchmark/benchmark.h>

#include "sfa/empirical.hpp"

namespace {

void BM_SampleTrajectory(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::uniform_cosine();
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfa::sample_trajectory(p, steps, 1e-3, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTrajectory)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_LinearSfa(benchmark::State& state) {
  static const sfa::Trajectory t = sfa::sample_trajectory(sfa::uniform_cosine(), 1000000, 1e-3, 1);
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfa::run_linear_sfa(t, degree, 2));
}
BENCHMARK(BM_LinearSfa)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
