#include <benchmark/benchmark.h>

#include "sfa/solver.hpp"

namespace {

void BM_SolveUniform(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::uniform_cosine();
  sfa::SolveOptions o;
  o.modes = 5;
  o.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfa::solve_eigenpairs(p, o));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveUniform)->RangeMultiplier(2)->Range(512, 8192)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SolveGaussian(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::gaussian_hermite();
  sfa::SolveOptions o;
  o.modes = 4;
  o.grid = static_cast<int>(state.range(0));
  o.tail_eps = 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(sfa::solve_eigenpairs(p, o));
}
BENCHMARK(BM_SolveGaussian)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SolveDiscrete(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::gaussian_hermite();
  const sfa::DiscreteOperator op = sfa::discretize(p, sfa::truncate_domain(p, 1e-12), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(sfa::solve_discrete(op, static_cast<int>(state.range(0)), false));
}
BENCHMARK(BM_SolveDiscrete)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
