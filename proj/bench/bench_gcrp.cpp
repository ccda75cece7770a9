// Serial reference vs OpenMP ensemble, and single-trajectory throughput.

#include <benchmark/benchmark.h>

#include "gcrp/ensemble.hpp"
#include "gcrp/simulate.hpp"

using namespace gcrp;

namespace {

const ModelParams kParams = validate_params(0.5, 0.5);

EnsembleConfig config(std::int64_t replicas, int threads) {
  EnsembleConfig c;
  c.horizon = 100000;
  c.replicas = replicas;
  c.base_seed = 1;
  c.kmax = 10;
  c.threads = threads;
  return c;
}

void BM_SimulateHorizon1e6(benchmark::State& state) {
  const SimConfig cfg{1000000, {1000000}, 1, 42, 0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(kParams, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK(BM_SimulateHorizon1e6)->Unit(benchmark::kMillisecond);

void BM_EnsembleSerial(benchmark::State& state) {
  const auto cfg = config(state.range(0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(kParams, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon * cfg.replicas);
}
BENCHMARK(BM_EnsembleSerial)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EnsembleOpenMP(benchmark::State& state) {
  const auto cfg = config(32, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(kParams, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon * cfg.replicas);
}
BENCHMARK(BM_EnsembleOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ShapeHistograms(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_shape_histograms(kParams, 8, 100000, 3, 0));
}
BENCHMARK(BM_ShapeHistograms)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
