#include <benchmark/benchmark.h>

#include "sfa/canonical.hpp"
#include "sfa/classification.hpp"

namespace {

void BM_RomanovProduct(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::gaussian_hermite();
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfa::romanov_product(p, sfa::Side::Right, 0.0, x));
}
BENCHMARK(BM_RomanovProduct)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_SpectrumVerdict(benchmark::State& state) {
  const sfa::CoefficientProblem p =
      state.range(0) == 0 ? sfa::gaussian_hermite() : sfa::power_law_counterexample(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sfa::spectrum_verdict(p));
}
BENCHMARK(BM_SpectrumVerdict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ClassifyProblem(benchmark::State& state) {
  const sfa::CoefficientProblem p = sfa::gaussian_hermite();
  for (auto _ : state) benchmark::DoNotOptimize(sfa::classify_problem(p));
}
BENCHMARK(BM_ClassifyProblem)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
