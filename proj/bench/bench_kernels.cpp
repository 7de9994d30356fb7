#include <benchmark/benchmark.h>

#include <omp.h>

#include "pirpnn/harness.hpp"
#include "pirpnn/stability.hpp"

namespace {

pirpnn::ScanConfig small_scan(int m) {
  pirpnn::ScanConfig cfg;
  cfg.re_min = -100.0;
  cfg.re_max = -1e-3;
  cfg.approx_points_per_axis = 20;
  cfg.refine_levels = 0;
  cfg.mc_runs = 10;
  cfg.m_colloc = m;
  return cfg;
}

const std::vector<std::complex<double>>& mesh() {
  static const auto cells = pirpnn::build_scan_mesh(small_scan(10), 1);
  return cells;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto cfg = small_scan(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pirpnn::scan_points_serial(mesh(), cfg, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh().size()) * cfg.mc_runs);
}

void BM_ScanParallel(benchmark::State& state) {
  const auto cfg = small_scan(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pirpnn::scan_points(mesh(), cfg, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh().size()) * cfg.mc_runs);
  state.counters["threads"] = omp_get_max_threads();
}

void convergence(benchmark::State& state, bool parallel) {
  pirpnn::ExperimentSpec spec;
  spec.problem = "example1";
  spec.h_values = {0.25, 0.125, 0.0625, 0.03125};
  spec.timing = false;
  spec.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(pirpnn::run_convergence(spec));
}

void BM_ConvergenceSerial(benchmark::State& state) { convergence(state, false); }
void BM_ConvergenceParallel(benchmark::State& state) { convergence(state, true); }

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(4)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(4)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvergenceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvergenceParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
