#include <gtest/gtest.h>

#include <cmath>

#include "sbgk/bgk.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/oracles.hpp"
#include "sbgk/parallel.hpp"

using namespace sbgk;

namespace {

BGKConfig small_config() {
  BGKConfig c;
  c.epsilon = 0.01;
  c.dt = 1.0 / 256;
  c.T = 0.125;
  c.cells = 128;
  c.velocity_cells = 16;
  c.snapshot_stride = 8;
  return c;
}

}  // namespace

TEST(Transport, ZeroStaysZero) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::zero(1));
  SpatialGrid g(1, 4.0, 64);
  KineticField u(g, VelocityGrid(1.0, 8));
  auto p = sample_path(1, 0.01, 1.0, 1);
  for (double x : transport_substep(u, 3, p, spec).values) EXPECT_EQ(x, 0.0);
}

TEST(Transport, NoiselessTranslation) {
  auto spec = make_problem(Flux::linear_flux(1.0), fields::constant(1, {1.0, 0.0}), data::pulse(-0.5, 0.5, 1.0));
  SpatialGrid g(1, 3.0, 256);
  const double dt = 0.3 * g.h();
  auto p = BrownianPath::zero(1, dt, 1.0);
  DensityField rho0 = sample_density(spec.initial.rho, g);
  KineticField ut = transport_substep(lift(rho0, VelocityGrid(1.0, 8)), 0, p, spec);
  DensityField exact = sample_density([](const Point& x) { return std::abs(x[0] - 0.3 * 6.0 / 256) <= 0.5 ? 1.0 : 0.0; }, g);
  double err = l1_distance(density_from_kinetic(ut), exact);
  EXPECT_LE(err, g.h() * discrete_bv(rho0) / 2.0 + 1e-14);
}

TEST(Relax, MaxwellianIsFixedPoint) {
  SpatialGrid g(1, 1.0, 8);
  DensityField r(g);
  for (int i = 0; i < 8; ++i) r.values[i] = -0.8 + 0.2 * i;
  KineticField u = lift(r, VelocityGrid(1.0, 16));
  double gap = -1.0;
  KineticField v = relax_substep(u, 0.01, 0.1, &gap);
  EXPECT_EQ(v.values, u.values);
  EXPECT_EQ(gap, 0.0);
}

TEST(Relax, HugeEpsilonIsIdentity) {
  SpatialGrid g(1, 1.0, 4);
  KineticField u(g, VelocityGrid(1.0, 4));
  u.cell(1)[3] = 1.0;
  u.cell(2)[0] = -0.5;
  EXPECT_EQ(relax_substep(u, 1e300, 0.1).values, u.values);
}

TEST(Relax, HalvedMaxwellianHandValues) {
  SpatialGrid g(1, 1.0, 4);
  VelocityGrid vg(1.0, 4);
  DensityField r(g, 1.0);
  KineticField u = lift(r, vg);
  for (double& x : u.values) x *= 0.5;
  KineticField v = relax_substep(u, 0.1, 0.1);
  const double a = std::exp(-1.0);
  auto c = v.cell(0);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_DOUBLE_EQ(c[2], 0.5 * a + (1.0 - a));
  EXPECT_DOUBLE_EQ(c[3], 0.5 * a);
  EXPECT_NEAR(cell_density(c, vg), 0.5, 1e-16);
}

TEST(Relax, DensityConserved) {
  SpatialGrid g(1, 2.0, 64);
  auto p = sample_path(3, 0.01, 1.0, 1);
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-1.0, 0.0, 1.0));
  KineticField u = lift(sample_density(spec.initial.rho, g), VelocityGrid(1.0, 32));
  KineticField ut = transport_substep(u, 0, p, spec);
  KineticField v = relax_substep(ut, 0.02, 0.01);
  DensityField a = density_from_kinetic(ut), b = density_from_kinetic(v);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-15);
}

TEST(Defect, MaxwellianHasNone) {
  SpatialGrid g(1, 1.0, 8);
  DensityField r(g, 0.3);
  KineticField u = lift(r, VelocityGrid(1.0, 8));
  DefectAccumulator acc;
  EXPECT_EQ(accumulate_defect(u, relax_substep(u, 0.1, 0.1), acc), 0.0);
  EXPECT_EQ(acc.total, 0.0);
}

TEST(Defect, HandComputedSlab) {
  SpatialGrid g(1, 1.0, 4);
  VelocityGrid vg(1.0, 4);
  KineticField u(g, vg);
  u.cell(0)[3] = 1.0;
  const double eps = 0.5, dt = 0.01;
  KineticField v = relax_substep(u, eps, dt);
  DefectAccumulator acc;
  std::vector<double> window;
  double m = accumulate_defect(u, v, acc, &window);
  const double a = std::exp(-dt / eps);
  EXPECT_DOUBLE_EQ(m, g.h() * 0.25 * (1.0 - a));
  EXPECT_NEAR(m, g.h() * (dt / eps) * 0.25, g.h() * 0.25 * (dt / eps) * (dt / eps));
  EXPECT_DOUBLE_EQ(window[2], 0.5 * (1.0 - a));
  EXPECT_EQ(window[3], 0.0);
  EXPECT_EQ(acc.max_support, 0.5);
}

TEST(Defect, NegativeIsStructuralViolation) {
  SpatialGrid g(1, 1.0, 4);
  VelocityGrid vg(1.0, 4);
  KineticField before(g, vg), after(g, vg);
  after.cell(0)[1] = -0.1;
  DefectAccumulator acc;
  EXPECT_THROW(accumulate_defect(before, after, acc), StructuralViolation);
}

TEST(Step, ZeroDataStaysZero) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::zero(1));
  auto c = small_config();
  auto p = sample_path(11, c.dt, c.T, 1);
  Trajectory tr = run_simulation(spec, c, p);
  for (const auto& d : tr.density) EXPECT_EQ(d.max_abs(), 0.0);
  EXPECT_EQ(tr.defect.total, 0.0);
}

TEST(Step, SingleStepMaxPrinciple) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::cosine_bump(1, {0.0, 0.0}, 1.0, 0.9));
  auto c = small_config();
  auto p = sample_path(12, c.dt, c.T, 1);
  SpatialGrid g = simulation_grid(spec, c);
  DensityField r0 = sample_density(spec.initial.rho, g);
  KineticField u = lift(r0, simulation_vgrid(r0, c));
  DefectAccumulator acc;
  step(u, 0, c, p, spec, acc);
  EXPECT_LE(density_from_kinetic(u).max_abs(), r0.max_abs());
}

TEST(Simulation, ShiftOracleWithZeroField) {
  auto spec = make_problem(Flux::burgers(), fields::zero(1), data::cosine_bump(1, {0.0, 0.0}, 1.0, 1.0));
  BGKConfig c = small_config();
  c.cells = 512;
  c.dt = 1.0 / 1024;
  c.epsilon = 1.0 / 1024;
  c.T = 0.25;
  c.snapshot_stride = 256;
  auto p = sample_path(13, c.dt, c.T, 1);
  Trajectory tr = run_simulation(spec, c, p);
  const double shift = p.position(p.steps())[0];
  DensityField exact = sample_density([&](const Point& x) { return spec.initial.rho({x[0] - shift, 0.0}); }, tr.grid());
  EXPECT_LE(l1_distance(tr.density.back(), exact), 4.0 * (tr.grid().h() + c.dt + c.epsilon));
}

TEST(Simulation, DeterministicAcrossWorkerCounts) {
  auto spec = make_problem(Flux::burgers(), fields::shear_2d(0.5), data::cosine_bump(2, {0.0, 0.0}, 1.0, 1.0));
  BGKConfig c = small_config();
  c.cells = 64;
  c.T = 1.0 / 32;
  auto p = sample_path(14, c.dt, c.T, 2);
  const int saved = worker_count();
  set_worker_count(1);
  Trajectory a = run_simulation(spec, c, p);
  set_worker_count(3);
  Trajectory b = run_simulation(spec, c, p);
  set_worker_count(saved);
  ASSERT_EQ(a.density.size(), b.density.size());
  for (std::size_t m = 0; m < a.density.size(); ++m) EXPECT_EQ(a.density[m].values, b.density[m].values);
  EXPECT_EQ(a.defect.slab_mass, b.defect.slab_mass);
}

TEST(Simulation, RejectsMismatchedPath) {
  auto spec = make_problem(Flux::burgers(), fields::zero(1), data::pulse(-1.0, 0.0, 1.0));
  auto c = small_config();
  EXPECT_THROW(run_simulation(spec, c, sample_path(1, c.dt / 2, c.T, 1)), ConfigError);
}

TEST(Config, Validation) {
  BGKConfig c = small_config();
  EXPECT_TRUE(c.validate().empty());
  c.dt = 0.02;
  EXPECT_EQ(c.validate().size(), 1u);
  c.velocity_cells = 7;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Picard, WeakRelaxationIsTransport) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::cosine_bump(1, {0.0, 0.0}, 1.0, 1.0));
  BGKConfig c = small_config();
  c.cells = 128;
  c.velocity_cells = 16;
  c.epsilon = 1e6;
  c.T = 1.0 / 32;
  c.T1 = c.T;
  auto p = sample_path(15, c.dt, c.T, 1);
  PicardResult pr = picard_solve(spec, c, p);
  Trajectory tr = run_simulation(spec, c, p);
  EXPECT_LE(l1_distance(pr.trajectory.density.back(), tr.density.back()), tr.grid().h() * discrete_bv(tr.density.front()));
  EXPECT_LT(pr.bound, 1e-6);
}

TEST(Picard, ContractionWithinBound) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::cosine_bump(1, {0.0, 0.0}, 1.0, 1.0));
  BGKConfig c = small_config();
  c.epsilon = 0.1;
  c.T = 0.1;
  c.dt = 0.1 / 32;
  c.T1 = 0.05;
  auto p = sample_path(16, c.dt, c.T, 1);
  PicardResult pr = picard_solve(spec, c, p);
  EXPECT_TRUE(pr.converged);
  EXPECT_LE(pr.contraction, pr.bound + 0.05);
  EXPECT_NEAR(picard_bound(0.05, 0.5, 0.1), std::exp(0.025) * (1.0 - std::exp(-0.5)), 1e-15);
}

TEST(Continuation, WarnsWhenEpsilonBelowDt) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-1.0, 0.0, 1.0));
  BGKConfig c = small_config();
  c.T = 1.0 / 32;
  auto p = sample_path(17, c.dt, c.T, 1);
  auto rep = epsilon_continuation(spec, c, p, {0.02, 0.01, 0.002});
  EXPECT_FALSE(rep.warnings.empty());
  EXPECT_THROW(epsilon_continuation(spec, c, p, {0.01, 0.02}), ConfigError);
}
