#include <benchmark/benchmark.h>

#include <cmath>

#include "sdflow/geometry.hpp"
#include "sdflow/holder.hpp"
#include "sdflow/stepping.hpp"

using namespace sdflow;

namespace {

Grid make_grid(const benchmark::State& state) {
  return Grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1.5);
}

HeightField perturbation(const Grid& g) {
  return Field::sample(g, [](double x, double t) {
    return 0.05 * std::sin(x) + 0.02 * std::cos(2 * x + t);
  });
}

void BM_SdOperator(benchmark::State& state) {
  const HeightField h = perturbation(make_grid(state));
  for (auto _ : state) benchmark::DoNotOptimize(sd_operator(h));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(h.size()));
}

void BM_QuasilinearSplit(benchmark::State& state) {
  const HeightField h = perturbation(make_grid(state));
  for (auto _ : state) benchmark::DoNotOptimize(quasilinear_split(h));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(h.size()));
}

void BM_Step(benchmark::State& state) {
  const HeightField h = perturbation(make_grid(state));
  StepConfig cfg;
  cfg.dt = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(step(h, cfg));
}

void BM_HolderNorm(benchmark::State& state) {
  const HeightField h = perturbation(make_grid(state));
  for (auto _ : state) benchmark::DoNotOptimize(holder_norm(h, 3, 0.5));
}

}  // namespace

BENCHMARK(BM_SdOperator)->Args({128, 1})->Args({128, 16})->Args({128, 64});
BENCHMARK(BM_QuasilinearSplit)->Args({128, 1})->Args({128, 16})->Args({128, 64});
BENCHMARK(BM_Step)->Args({128, 1})->Args({128, 16});
BENCHMARK(BM_HolderNorm)->Args({64, 1})->Args({64, 16});
