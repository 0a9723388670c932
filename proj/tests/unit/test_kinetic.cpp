#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"

using namespace sbgk;

TEST(Maxwellian, ZeroDensityIsZero) {
  VelocityGrid vg(1.0, 8);
  for (double x : maxwellian_cell_average(0.0, vg)) EXPECT_EQ(x, 0.0);
}

TEST(Maxwellian, FullDensityFillsPositiveHalf) {
  VelocityGrid vg(2.0, 8);
  auto m = maxwellian_cell_average(2.0, vg);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(m[j], 0.0);
  for (int j = 4; j < 8; ++j) EXPECT_EQ(m[j], 1.0);
  auto n = maxwellian_cell_average(-2.0, vg);
  for (int j = 0; j < 4; ++j) EXPECT_EQ(n[j], -1.0);
  for (int j = 4; j < 8; ++j) EXPECT_EQ(n[j], 0.0);
}

TEST(Maxwellian, HalfCellOverlap) {
  VelocityGrid vg(1.0, 8);
  auto m = maxwellian_cell_average(0.5 * vg.dv(), vg);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(m[j], j == vg.positive_begin() ? 0.5 : 0.0);
}

TEST(Maxwellian, RejectsDensityAboveBound) {
  VelocityGrid vg(1.0, 8);
  EXPECT_THROW(maxwellian_cell_average(1.25, vg), RangeError);
  EXPECT_THROW(maxwellian_cell_average(-1.25, vg), RangeError);
}

TEST(Maxwellian, MassIsExact) {
  VelocityGrid vg(1.0, 64);
  for (double r : {0.3, -0.71, 0.999, 1.0, -1.0}) {
    auto m = maxwellian_cell_average(r, vg);
    EXPECT_EQ(cell_density(m, vg), r);
  }
}

TEST(RoundTrip, ConstantDensity) {
  SpatialGrid g(1, 1.0, 16);
  DensityField rho(g, 0.7);
  DensityField back = density_from_kinetic(lift(rho, VelocityGrid(0.7, 64)));
  for (double x : back.values) EXPECT_EQ(x, 0.7);
}

TEST(RoundTrip, ZeroKineticGivesZero) {
  SpatialGrid g(1, 1.0, 16);
  KineticField u(g, VelocityGrid(1.0, 8));
  for (double x : density_from_kinetic(u).values) EXPECT_EQ(x, 0.0);
}

TEST(RoundTrip, RandomDensityBitForBit) {
  SpatialGrid g(2, 1.0, 32);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(-1.3, 0.9);
  DensityField rho(g);
  for (double& x : rho.values) x = U(rng);
  // Dyadic spacing: exact.
  for (int nv : {16, 64}) {
    DensityField back = density_from_kinetic(lift(rho, VelocityGrid(2.0, nv)));
    EXPECT_EQ(back.values, rho.values);
  }
  // Otherwise within one rounding.
  for (int nv : {16, 30}) {
    DensityField back = density_from_kinetic(lift(rho, VelocityGrid::for_data(rho.max_abs(), nv)));
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(back.values[i], rho.values[i], 2.3e-16 * std::abs(rho.values[i]));
    }
  }
}

TEST(RoundTrip, SignStructure) {
  SpatialGrid g(1, 1.0, 16);
  DensityField rho(g);
  for (std::size_t i = 0; i < g.size(); ++i) rho.values[i] = std::sin(3.0 * g.center(static_cast<int>(i)));
  VelocityGrid vg = VelocityGrid::for_data(rho.max_abs(), 32);
  KineticField u = lift(rho, vg);
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto c = u.cell(i);
    for (int j = 0; j < vg.cells(); ++j) {
      EXPECT_GE(sgn(vg.center(j)) * c[j], 0.0);
      EXPECT_LE(std::abs(c[j]), 1.0);
    }
  }
}

TEST(RoundTrip, L1DistanceOfLifts) {
  VelocityGrid vg(1.0, 64);
  for (auto [a, b] : {std::pair{0.3, -0.45}, {0.9, 0.1}, {-1.0, 1.0}, {0.25, 0.25}}) {
    auto ma = maxwellian_cell_average(a, vg), mb = maxwellian_cell_average(b, vg);
    double s = 0.0;
    for (int j = 0; j < vg.cells(); ++j) s += std::abs(ma[j] - mb[j]);
    EXPECT_NEAR(s * vg.dv(), std::abs(a - b), 1e-15);
  }
}

TEST(EntropyPair, IdentityFlux) {
  Flux id = Flux::linear_flux(1.0);
  auto p = entropy_pair(3.0, 1.0, id);
  EXPECT_EQ(p.eta, 1.0);
  EXPECT_EQ(p.q, 1.0);
  auto z = entropy_pair(0.0, 0.0, id);
  EXPECT_EQ(z.eta, 0.0);
  EXPECT_EQ(z.q, 0.0);
}

TEST(EntropyPair, Burgers) {
  auto p = entropy_pair(-2.0, 1.0, Flux::burgers());
  EXPECT_EQ(p.eta, 2.0);
  EXPECT_EQ(p.q, -2.0);
}

TEST(DiscreteBV, ConstantIsZero) {
  SpatialGrid g(2, 1.0, 16);
  EXPECT_EQ(discrete_bv(DensityField(g, 0.4)), 0.0);
}

TEST(DiscreteBV, StepHeightIndependentOfH) {
  for (int n : {16, 64, 256}) {
    SpatialGrid g(1, 1.0, n);
    DensityField r(g);
    for (int i = n / 2; i < n; ++i) r.values[i] = 1.0;
    EXPECT_EQ(discrete_bv(r), 1.0);
  }
}

TEST(DiscreteBV, SineApproachesFour) {
  SpatialGrid g(1, std::numbers::pi, 1024);
  DensityField r(g);
  for (int i = 0; i < 1024; ++i) r.values[i] = std::sin(g.center(i));
  EXPECT_NEAR(discrete_bv(r), 4.0, 0.08);
}

TEST(DiscreteBV, HomogeneousAndSubadditive) {
  SpatialGrid g(2, 1.0, 24);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> Z;
  DensityField a(g), b(g), s(g), k(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a.values[i] = Z(rng);
    b.values[i] = Z(rng);
    s.values[i] = a.values[i] + b.values[i];
    k.values[i] = -2.5 * a.values[i];
  }
  EXPECT_LE(discrete_bv(s), discrete_bv(a) + discrete_bv(b) + 1e-12);
  EXPECT_NEAR(discrete_bv(k), 2.5 * discrete_bv(a), 1e-12);
}

TEST(DiscreteBV, EmptyRegionIsZero) {
  SpatialGrid g(1, 1.0, 16);
  DensityField r(g);
  for (int i = 0; i < 16; ++i) r.values[i] = i;
  EXPECT_EQ(discrete_bv(r, Region{{0.3, 0.0}, {0.3, 0.0}}), 0.0);
}

TEST(Norms, ConstantOnBox) {
  SpatialGrid g(2, 1.5, 8);
  DensityField r(g, 0.5);
  const double V = 9.0;
  EXPECT_NEAR(lp_norm(r, Norm::L1), 0.5 * V, 1e-14);
  EXPECT_NEAR(lp_norm(r, Norm::L2), 0.5 * std::sqrt(V), 1e-14);
  EXPECT_EQ(lp_norm(r, Norm::Linf), 0.5);
  EXPECT_EQ(lp_norm(DensityField(g), Norm::L2), 0.0);
}

TEST(Norms, IndicatorOfOneCell) {
  SpatialGrid g(2, 1.0, 8);
  DensityField r(g);
  r.values[g.flat(3, 5)] = 1.0;
  EXPECT_EQ(lp_norm(r, Norm::L1), g.h() * g.h());
}

TEST(Grids, Validation) {
  EXPECT_THROW(SpatialGrid(3, 1.0, 16), DimensionError);
  EXPECT_THROW(SpatialGrid(1, -1.0, 16), ConfigError);
  EXPECT_THROW(VelocityGrid(1.0, 7), ConfigError);
  EXPECT_THROW(VelocityGrid(0.0, 8), ConfigError);
  EXPECT_EQ(VelocityGrid::for_data(0.0, 8).bound(), 1.0);
}
