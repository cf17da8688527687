// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "ouestim/limit_theory.hpp"
#include "ouestim/montecarlo.hpp"

namespace {

using ouestim::KernelSpec;

const KernelSpec kKernel = KernelSpec::sfbm(0.7);

void BM_VarianceParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ouestim::variance_curve(kKernel, 1.0, 5.0, n).direct);
}

void BM_VarianceSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ouestim::reference::variance_direct(kKernel, 1.0, 5.0, n));
}

void BM_ZInfParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ouestim::z_infinity_variance(kKernel, 1.0, 40.0, n).variance);
}

void BM_ZInfSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ouestim::reference::z_infinity(kKernel, 1.0, 40.0, n));
}

ouestim::MCConfig mc_config() {
  ouestim::MCConfig cfg;
  cfg.kernel = KernelSpec::fbm(0.7);
  cfg.horizons = {5.0, 10.0};
  cfg.points_per_unit = 102.4;
  cfg.replicates = 64;
  cfg.seed = 7;
  return cfg;
}

void BM_MCParallel(benchmark::State& state) {
  const auto cfg = mc_config();
  for (auto _ : state) benchmark::DoNotOptimize(ouestim::run_consistency(cfg).summary.steps);
}

void BM_MCSerial(benchmark::State& state) {
  const auto cfg = mc_config();
  for (auto _ : state)
    benchmark::DoNotOptimize(ouestim::reference::run_consistency(cfg).summary.steps);
}

}  // namespace

BENCHMARK(BM_VarianceParallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VarianceSerial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZInfParallel)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZInfSerial)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MCParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MCSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
