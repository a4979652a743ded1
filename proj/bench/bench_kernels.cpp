// Serial reference vs OpenMP kernels on the LEO -> HEO scenario.

#include <benchmark/benchmark.h>

#include "geotransfer/scenario.hpp"

using namespace geotransfer;

namespace {

const Scenario& leo_heo() {
  static const Scenario s = load_scenario(GEOTRANSFER_SCENARIO_DIR "/leo_heo.json");
  return s;
}

PlannerConfig coarse_config(int n_pos) {
  PlannerConfig cfg = leo_heo().planner;
  cfg.n_pos_samples = n_pos;
  return cfg;
}

void BM_CoarseSerial(benchmark::State& state) {
  const auto cfg = coarse_config(static_cast<int>(state.range(0)));
  const TransferGeometry geometry(leo_heo().problem, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(coarse_search_serial(geometry, cfg));
}

void BM_CoarseParallel(benchmark::State& state) {
  const auto cfg = coarse_config(static_cast<int>(state.range(0)));
  const TransferGeometry geometry(leo_heo().problem, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(coarse_search(geometry, cfg));
}

void BM_ContourSerial(benchmark::State& state) {
  const auto& cfg = leo_heo().planner;
  const TransferGeometry geometry(leo_heo().problem, cfg);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(contour_grid_serial(geometry, cfg, n, n));
}

void BM_ContourParallel(benchmark::State& state) {
  const auto& cfg = leo_heo().planner;
  const TransferGeometry geometry(leo_heo().problem, cfg);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(contour_grid(geometry, cfg, n, n));
}

}  // namespace

BENCHMARK(BM_CoarseSerial)->Arg(45)->Arg(90)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CoarseParallel)->Arg(45)->Arg(90)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ContourSerial)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ContourParallel)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
