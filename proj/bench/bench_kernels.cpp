// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Ensemble
//
// Arguments of the parallel variants are the thread counts.

#include <benchmark/benchmark.h>

#include "specmult/green_matrix.hpp"
#include "specmult/operator_models.hpp"
#include "specmult/statistics.hpp"

namespace {

using namespace specmult;

EnsembleSpec stacked_ensemble() {
  EnsembleSpec spec;
  spec.model = models::stacked_identical(200, 3);
  spec.realizations = 64;
  spec.master_seed = 1;
  spec.regions = consecutive_regions(spec.model.scheme, 10);
  return spec;
}

EnsembleSpec counterexample_ensemble() {
  EnsembleSpec spec;
  spec.model = models::remark_stacked_5(60);
  spec.realizations = 8;
  spec.master_seed = 1;
  spec.regions = whole_volume(spec.model.scheme);
  return spec;
}

void BM_EnsembleSerial(benchmark::State& state, EnsembleSpec (*make)()) {
  const auto spec = make();
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(spec));
  state.SetItemsProcessed(state.iterations() * spec.realizations);
}

void BM_EnsembleParallel(benchmark::State& state, EnsembleSpec (*make)()) {
  const auto spec = make();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_parallel(spec, threads));
  state.SetItemsProcessed(state.iterations() * spec.realizations);
}

struct GreenCase {
  Matrix h;
  IndexSet b;
  std::vector<Complex> zs;
};

GreenCase green_case() {
  const auto model = models::anderson_1d_rank1(120);
  GreenCase c;
  c.h = sample_model(model, build_h0(model.lattice), 1, 0).matrix;
  c.b = {50, 51, 52};
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) c.zs.emplace_back(-6.0 + 0.6 * i, 0.01 + 0.1 * j);
  return c;
}

void BM_GreenGridSerial(benchmark::State& state) {
  const auto c = green_case();
  const auto method = static_cast<GreenMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(green_grid_serial(c.h, c.b, c.zs, method));
  state.SetItemsProcessed(state.iterations() * c.zs.size());
}

void BM_GreenGridParallel(benchmark::State& state) {
  const auto c = green_case();
  const auto method = static_cast<GreenMethod>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(green_grid_parallel(c.h, c.b, c.zs, method, threads));
  state.SetItemsProcessed(state.iterations() * c.zs.size());
}

}  // namespace

BENCHMARK_CAPTURE(BM_EnsembleSerial, stacked3, stacked_ensemble)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnsembleParallel, stacked3, stacked_ensemble)
    ->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_EnsembleSerial, counterexample, counterexample_ensemble)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnsembleParallel, counterexample, counterexample_ensemble)
    ->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

// range(0): 0 = direct, 1 = schur
BENCHMARK(BM_GreenGridSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreenGridParallel)
    ->ArgsProduct({{0, 1}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
