#include <benchmark/benchmark.h>

#include "mwk/hessian.hpp"
#include "mwk/width.hpp"

namespace {

void BM_Exact3d(benchmark::State& state) {
  const auto S = mwk::random_feasible_simplex(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mwk::mean_width_exact3d(S).value);
}
BENCHMARK(BM_Exact3d);

void BM_MonteCarlo(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto S = mwk::random_feasible_simplex(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mwk::mean_width_mc(S, 100000, 3).value);
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MonteCarlo)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Mat(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto S = mwk::random_feasible_simplex(d, 4);
  for (auto _ : state) benchmark::DoNotOptimize(mwk::mean_width_mat(S, 5000, 5).value);
}
BENCHMARK(BM_Mat)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RegionScan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mwk::region_scan(n).rows.size());
}
BENCHMARK(BM_RegionScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Optimize3d(benchmark::State& state) {
  mwk::OptimizerParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mwk::optimize_width(3, std::nullopt, p).final_state().width.value);
  }
}
BENCHMARK(BM_Optimize3d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
