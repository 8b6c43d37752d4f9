// Serial reference kernels against their OpenMP versions on the default field.
#include <benchmark/benchmark.h>

#include <cmath>

#include "weedsim/harness.hpp"
#include "weedsim/kernels.hpp"

using namespace weedsim;

namespace {

const Field& field() {
  static const Field f = default_field();
  return f;
}

const std::vector<Vec2>& anchors() {
  static const std::vector<Vec2> a = standin_anchors(field());
  return a;
}

template <kernels::Exec E>
void BM_InsideMask(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::inside_mask(field().boundary(), field().grid(), E));
  }
}

template <kernels::Exec E>
void BM_ReduceCells(benchmark::State& state) {
  const Vec2 c = field().centroid();
  const kernels::CellFunction f = [c](Vec2 x) { return std::exp(-0.01 * distance_sq(x, c)); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::reduce_cells(field().grid(), field().inside_mask(), f, E));
  }
}

template <kernels::Exec E>
void BM_MaxDiskCount(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::max_disk_count(field().grid(), field().inside_mask(), anchors(), 2.0, E));
  }
}

template <kernels::Exec E>
void BM_LooLikelihood(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernels::loo_log_likelihood(anchors(), 1.5, E));
}

}  // namespace

BENCHMARK(BM_InsideMask<kernels::Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InsideMask<kernels::Exec::parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReduceCells<kernels::Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReduceCells<kernels::Exec::parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxDiskCount<kernels::Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaxDiskCount<kernels::Exec::parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LooLikelihood<kernels::Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LooLikelihood<kernels::Exec::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
