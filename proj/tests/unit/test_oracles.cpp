#include <gtest/gtest.h>

#include <cmath>

#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/oracles.hpp"

using namespace sbgk;

namespace {

// Position of the first cell whose value drops below one half.
double front(const DensityField& r) {
  for (int i = 0; i + 1 < r.grid.cells_per_axis(); ++i) {
    if (r.values[i] >= 0.5 && r.values[i + 1] < 0.5) return r.grid.center(i) + 0.5 * r.grid.h();
  }
  return std::nan("");
}

}  // namespace

TEST(Riemann, ExactValues) {
  EXPECT_EQ(exact_riemann_burgers(1.0, 0.0, 0.4), 1.0);
  EXPECT_EQ(exact_riemann_burgers(1.0, 0.0, 0.6), 0.0);
  EXPECT_EQ(exact_riemann_burgers(0.0, 1.0, 0.5), 0.5);
  EXPECT_EQ(exact_riemann_burgers(0.3, 0.3, -2.0), 0.3);
}

TEST(Godunov, ShockMovesAtHalfSpeed) {
  SpatialGrid g(1, 2.0, 400);
  DensityField r0 = sample_density([](const Point& x) { return x[0] > -1.5 && x[0] < 0.0 ? 1.0 : 0.0; }, g);
  const double T = 1.0;
  auto run = godunov_solve(Flux::burgers(), r0, godunov_dt(Flux::burgers(), r0, T, 0.9), T);
  EXPECT_NEAR(front(run.snapshots.back()), T / 2, g.h());
}

TEST(Godunov, RarefactionError) {
  SpatialGrid g(1, 2.0, 800);
  DensityField r0 = sample_density([](const Point& x) { return x[0] > 0.0 && x[0] < 1.5 ? 1.0 : 0.0; }, g);
  const double T = 0.5;
  auto run = godunov_solve(Flux::burgers(), r0, godunov_dt(Flux::burgers(), r0, T, 0.9), T);
  DensityField exact = sample_density(
      [&](const Point& x) { return x[0] < 1.0 ? exact_riemann_burgers(0.0, 1.0, x[0] / T) : (x[0] < 1.5 + T / 2 ? 1.0 : 0.0); }, g);
  DensityField got = run.snapshots.back();
  Region fan{{-1.0, 0.0}, {1.0, 0.0}};
  const double h = g.h();
  EXPECT_LE(l1_distance(got, exact, fan), 2.0 * h * (1.0 + std::log(1.0 / h)));
}

TEST(Godunov, LinearTranslation) {
  SpatialGrid g(1, 2.0, 200);
  DensityField r0 = sample_density([](const Point& x) { return std::abs(x[0]) < 0.5 ? 1.0 : 0.0; }, g);
  Flux f = Flux::linear_flux(1.0);
  auto run = godunov_solve(f, r0, g.h(), 0.5);
  DensityField exact = sample_density([](const Point& x) { return std::abs(x[0] - 0.5) < 0.5 ? 1.0 : 0.0; }, g);
  EXPECT_LE(l1_distance(run.snapshots.back(), exact), 1e-12);
}

TEST(Godunov, CflViolation) {
  SpatialGrid g(1, 1.0, 100);
  DensityField r0(g, 1.0);
  EXPECT_THROW(godunov_solve(Flux::burgers(), r0, 2.0 * g.h(), 0.5), ConfigError);
}

TEST(Godunov, MaxPrinciple) {
  SpatialGrid g(1, 2.0, 200);
  DensityField r0 = sample_density([](const Point& x) { return std::sin(4.0 * x[0]) * (std::abs(x[0]) < 1.5); }, g);
  auto run = godunov_solve(Flux::burgers(), r0, godunov_dt(Flux::burgers(), r0, 0.5, 0.9), 0.5, 1);
  for (const auto& s : run.snapshots) EXPECT_LE(s.max_abs(), r0.max_abs());
}

TEST(ShiftOracle, ZeroPathMatchesGodunov) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-1.0, 0.0, 1.0));
  SpatialGrid g(1, 3.0, 300);
  DensityField r0 = sample_density(spec.initial.rho, g);
  auto p = BrownianPath::zero(1, 0.01, 0.5);
  DensityField o = shift_reduction_oracle(spec, r0, p, 0.5);
  auto run = godunov_solve(Flux::burgers(), r0, godunov_dt(Flux::burgers(), r0, 0.5, 0.9), 0.5);
  EXPECT_EQ(o.values, run.snapshots.back().values);
}

TEST(ShiftOracle, ShockFollowsPath) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-2.0, 0.0, 1.0));
  SpatialGrid g(1, 4.0, 800);
  DensityField r0 = sample_density(spec.initial.rho, g);
  const double dt = 1.0 / 256, T = 0.5;
  auto p = sample_path(21, dt, T, 1);
  DensityField o = shift_reduction_oracle(spec, r0, p, T);
  EXPECT_NEAR(front(o), T / 2 + p.position(p.steps())[0], g.h() + dt);
}

TEST(ShiftOracle, RefusesXDependentField) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::pulse(-1.0, 0.0, 1.0));
  SpatialGrid g(1, 3.0, 64);
  EXPECT_THROW(shift_reduction_oracle(spec, sample_density(spec.initial.rho, g), BrownianPath::zero(1, 0.01, 0.5), 0.5),
               ConfigError);
}

TEST(Characteristics, ZeroFieldIsShiftAtNodes) {
  auto spec = make_problem(Flux::linear_flux(1.0), fields::zero(1), data::cosine_bump(1, {0.0, 0.0}, 1.0, 1.0));
  SpatialGrid g(1, 3.0, 64);
  auto p = sample_path(22, 1.0 / 64, 1.0, 1);
  DensityField o = linear_characteristics_oracle(spec, g, p, 0.5);
  const double B = p.position(32)[0];
  for (int i = 0; i < 64; ++i) EXPECT_EQ(o.values[i], spec.initial.rho({g.center(i) - B, 0.0}));
}

TEST(Characteristics, RefusesNonlinearFlux) {
  auto spec = make_problem(Flux::burgers(), fields::zero(1), data::cosine_bump(1, {0.0, 0.0}, 1.0, 1.0));
  EXPECT_THROW(linear_characteristics_oracle(spec, SpatialGrid(1, 3.0, 64), BrownianPath::zero(1, 0.1, 1.0), 0.5),
               ConfigError);
}

TEST(Rates, PowerLawFit) {
  std::vector<double> h{0.1, 0.05, 0.025}, e;
  for (double x : h) e.push_back(3.0 * x * x);
  EXPECT_NEAR(fit_rate(h, e), 2.0, 1e-12);
}

TEST(Rates, NestedL1Error) {
  SpatialGrid c(1, 1.0, 8), f(1, 1.0, 32);
  DensityField a(c, 0.5), b(f, 0.5);
  EXPECT_EQ(l1_error_on_fine(a, b), 0.0);
  b.values[0] = 1.5;
  EXPECT_DOUBLE_EQ(l1_error_on_fine(a, b), f.h());
}
