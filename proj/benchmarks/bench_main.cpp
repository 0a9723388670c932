// Throughput of the main kernels.
#include <benchmark/benchmark.h>

#include "sbgk/bgk.hpp"
#include "sbgk/brownian.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/oracles.hpp"

using namespace sbgk;

namespace {

ProblemSpec riemann() {
  return make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-1.0, 0.0, 1.0));
}

void BM_Lift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SpatialGrid g(1, 4.0, n);
  DensityField rho = sample_density(riemann().initial.rho, g);
  VelocityGrid vg(2.0, 64);
  for (auto _ : state) benchmark::DoNotOptimize(lift(rho, vg));
  state.SetItemsProcessed(state.iterations() * n * 64);
}
BENCHMARK(BM_Lift)->Arg(1024)->Arg(8192);

void BM_Simulate1D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  BGKConfig c;
  c.cells = n;
  c.velocity_cells = 32;
  c.dt = 1.0 / n;
  c.epsilon = 1.0 / n;
  c.T = 0.125;
  c.snapshot_stride = 1 << 20;
  auto spec = riemann();
  BrownianPath p = sample_path(1, c.dt, c.T, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(spec, c, p));
}
BENCHMARK(BM_Simulate1D)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Simulate2D(benchmark::State& state) {
  BGKConfig c;
  c.cells = static_cast<int>(state.range(0));
  c.velocity_cells = 8;
  c.dt = 1.0 / 64;
  c.epsilon = 1.0 / 64;
  c.T = 0.125;
  c.snapshot_stride = 1 << 20;
  auto spec = make_problem(Flux::burgers(), fields::shear_2d(1.0), data::cosine_bump(2, {0.0, 0.0}, 1.0, 1.0));
  BrownianPath p = sample_path(2, c.dt, c.T, 2);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(spec, c, p));
}
BENCHMARK(BM_Simulate2D)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Godunov(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SpatialGrid g(1, 4.0, n);
  DensityField rho = sample_density(riemann().initial.rho, g);
  const double dt = godunov_dt(Flux::burgers(), rho, 0.25, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(godunov_solve(Flux::burgers(), rho, dt, 0.25));
}
BENCHMARK(BM_Godunov)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_SamplePath(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample_path(3, 1.0 / 65536, 1.0, 2));
}
BENCHMARK(BM_SamplePath)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
