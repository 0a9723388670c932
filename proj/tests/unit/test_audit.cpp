#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sbgk/audit.hpp"
#include "sbgk/counterexample.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"

using namespace sbgk;

namespace {

BGKConfig config(double T = 0.25) {
  BGKConfig c;
  c.epsilon = 1.0 / 256;
  c.dt = 1.0 / 512;
  c.T = T;
  c.cells = 256;
  c.velocity_cells = 32;
  c.snapshot_stride = 8;
  return c;
}

Trajectory burgers_run(std::uint64_t seed, bool zero = false) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}), data::pulse(-1.0, 0.0, 1.0));
  auto c = config();
  auto p = zero ? BrownianPath::zero(1, c.dt, c.T) : sample_path(seed, c.dt, c.T, 1);
  return run_simulation(spec, c, p);
}

}  // namespace

TEST(Checks, BurgersShockPassesStructuralChecks) {
  Trajectory tr = burgers_run(1);
  EXPECT_TRUE(check_max_principle(tr).pass);
  EXPECT_TRUE(check_l1_growth(tr).pass);
  EXPECT_TRUE(check_l1_equality(tr).pass);
  EXPECT_TRUE(check_defect_structure(tr).pass);
  auto bv = check_bv_nonincrease(tr);
  EXPECT_TRUE(bv.pass);
  EXPECT_NEAR(bv.bound, 2.0, 1e-15);
  auto e = check_energy_defect_identity(tr);
  EXPECT_TRUE(e.pass) << e.note;
  EXPECT_GT(tr.defect.total, 0.0);
}

TEST(Checks, MaxPrincipleNegativeControl) {
  Trajectory tr = burgers_run(2);
  tr.density[3].values[100] = 1.01;
  EXPECT_FALSE(check_max_principle(tr).pass);
}

TEST(Checks, ConstantDataEquality) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}),
                           InitialData{"flat", [](const Point&) { return 0.5; }, Region{{-1, 0}, {1, 0}}, 0.5});
  auto c = config(1.0 / 16);
  c.half_width = 4.0;
  auto tr = run_simulation(spec, c, BrownianPath::zero(1, c.dt, c.T));
  auto m = check_max_principle(tr);
  EXPECT_TRUE(m.pass);
  EXPECT_EQ(m.measured, m.bound);
}

TEST(Checks, L1GrowthEqualityAtTimeZero) {
  Trajectory tr = burgers_run(3);
  EXPECT_DOUBLE_EQ(tr.kinetic_l1.front(), lp_norm(tr.density.front(), Norm::L1));
}

TEST(Checks, EnergySkippedWithDivergence) {
  auto spec = make_problem(Flux::burgers(), fields::sine_1d(0.5), data::pulse(-1.0, 0.0, 1.0));
  auto c = config(1.0 / 16);
  auto tr = run_simulation(spec, c, sample_path(4, c.dt, c.T, 1));
  auto e = check_energy_defect_identity(tr);
  EXPECT_TRUE(e.skipped);
  EXPECT_TRUE(check_l1_growth(tr).pass);
}

TEST(Checks, ComparisonOfEqualData) {
  Trajectory a = burgers_run(5), b = burgers_run(5);
  auto c = check_comparison(a, b);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.measured, 0.0);
  Trajectory d = burgers_run(6);
  EXPECT_THROW(check_comparison(a, d), ConfigError);
}

TEST(Checks, NonnegativeDataStaysNonnegative) {
  Trajectory tr = burgers_run(7);
  for (const auto& d : tr.density) {
    for (double x : d.values) EXPECT_GE(x, 0.0);
  }
}

TEST(Entropy, ConstantFieldZeroResidual) {
  SpatialGrid g(1, 4.0, 128);
  std::vector<DensityField> f(9, DensityField(g, 0.3));
  std::vector<double> t;
  for (int m = 0; m < 9; ++m) t.push_back(m / 8.0);
  auto spec = make_problem(Flux::burgers(), fields::zero(1), data::zero(1));
  auto p = sample_path(1, 1.0 / 8, 1.0, 1);
  auto r = entropy_residual(f, t, p, spec, entropy_family({-0.5, 0.0, 0.5}), SpatialBump{{0.0, 0.0}, 2.0, 1},
                            TemporalRamp{0.25, 0.5});
  EXPECT_NEAR(r.worst, 0.0, 1e-12);
}

TEST(Entropy, SubfamilyResidualIsLarger) {
  Trajectory tr = burgers_run(8);
  SpatialBump phi{{0.0, 0.0}, 2.0, 1};
  TemporalRamp psi{0.05, 0.1};
  auto full = entropy_residual(tr, entropy_family({-0.5, 0.0, 0.25, 0.5}), phi, psi);
  auto sub = entropy_residual(tr, entropy_family({0.5}), phi, psi);
  EXPECT_GE(sub.worst, full.worst);
}

TEST(Entropy, TestSupportMustAvoidBoundary) {
  Trajectory tr = burgers_run(9);
  EXPECT_THROW(entropy_residual(tr, entropy_family({0.0}), SpatialBump{{0.0, 0.0}, 100.0, 1}, TemporalRamp{0.1, 0.1}),
               ConfigError);
}

TEST(Entropy, FamilyValues) {
  Entropy e{0.5, {{2.0, 0.25}}};
  EXPECT_DOUBLE_EQ(e.eta(1.0), 0.5 + 1.5);
  EXPECT_DOUBLE_EQ(e.q(1.0, Flux::linear_flux(1.0)), 0.5 + 2.0 * 0.75);
  EXPECT_EQ(entropy_family({0.1, 0.2}).size(), 4u);
}

TEST(Kinetic, ZeroSolutionIsZero) {
  auto spec = make_problem(Flux::burgers(), fields::zero(1), data::zero(1));
  auto c = config(1.0 / 16);
  c.keep_kinetic = true;
  c.keep_defect_field = true;
  auto tr = run_simulation(spec, c, sample_path(10, c.dt, c.T, 1));
  EXPECT_EQ(kinetic_residual(tr, SpatialBump{{0.0, 0.0}, 1.0, 1}, [](double v) { return v; }), 0.0);
}

TEST(Holder, ConstantDataDegenerate) {
  auto spec = make_problem(Flux::burgers(), fields::constant(1, {1.0, 0.0}),
                           InitialData{"flat", [](const Point&) { return 0.5; }, Region{{-1, 0}, {1, 0}}, 0.5});
  auto c = config(0.5);
  c.half_width = 6.0;
  c.snapshot_stride = 1;
  auto tr = run_simulation(spec, c, BrownianPath::zero(1, c.dt, c.T));
  auto fit = fit_holder_exponent(tr, Region{{-1.0, 0.0}, {1.0, 0.0}});
  EXPECT_TRUE(fit.degenerate);
}

TEST(Commutator, ConstantWIsZero) {
  CommutatorSetup s;
  s.b = [](const Point& p) { return Point{std::sin(p[1]), std::cos(p[0])}; };
  s.w = [](const Point&) { return 0.7; };
  s.Q = Region{{0.0, 0.0}, {1.0, 1.0}};
  s.h = 1.0 / 128;
  auto tab = commutator_experiment(s, {0.2, 0.1});
  for (const auto& r : tab.rows) {
    EXPECT_TRUE(r.identically_zero);
    EXPECT_EQ(r.integral, 0.0);
  }
}

TEST(Commutator, KernelNormalised) {
  const int n = 4000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += commutator_kernel_1d(-1.0 + 2.0 * (i + 0.5) / n) * 2.0 / n;
  EXPECT_NEAR(s, 1.0, 1e-9);
  EXPECT_EQ(commutator_kernel_1d(0.71), 0.0);
  EXPECT_GT(kernel_moment_I(), 0.0);
}

TEST(Commutator, UnderResolvedGridRefused) {
  CommutatorSetup s;
  s.b = [](const Point&) { return Point{1.0, 0.0}; };
  s.w = [](const Point& p) { return p[0]; };
  s.Q = Region{{0.0, 0.0}, {1.0, 1.0}};
  s.h = 0.05;
  EXPECT_THROW(commutator_experiment(s, {0.1}), ConfigError);
}

TEST(Report, CsvSchema) {
  AuditReport r;
  r.add({"a", true, false, 1.0, 2.0, 0.0, ""});
  r.add({"b", false, false, 3.0, 2.0, 0.0, ""});
  std::ostringstream os;
  r.write_csv(os);
  EXPECT_EQ(os.str(), "check,measured,bound,tol,status\na,1,2,0,PASS\nb,3,2,0,FAIL\n");
  EXPECT_FALSE(r.all_pass());
}
