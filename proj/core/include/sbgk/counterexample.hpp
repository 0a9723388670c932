#pragma once

#include <cstdint>
#include <vector>

#include "sbgk/bgk.hpp"
#include "sbgk/grid.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

namespace cusp {

/// 1_[0,1] sqrt(x) + 1_(1,inf) x^{-1/2}.
double b1(double x);
double b1_prime(double x);
/// 1_[0,inf) y / (1 + y^2).
double b2(double y);
double b2_prime(double y);

/// g(y) = exp(y^2) y^2 on y >= 0.
double g(double y);
double g_prime(double y);
/// Bracketed bisection on [0, sqrt(w)] followed by Newton polish.
double g_inverse(double w);

/// (x, g^{-1}(g(y) exp(2 b1(x) t))) for y >= 0; identity for y < 0.
Point exact_flow(double t, const Point& p);
Point exact_inverse_flow(double t, const Point& p);

/// 0 for x <= 0, sqrt(x) on [0, 1], cosine taper to 0 on [1, 3].
double rho01(double x);
/// sin^2(pi x / 3) on [0, 3].
double rho01_smooth(double x);
/// sin^2(pi y / 2) on [0, 2].
double rho02(double y);

}  // namespace cusp

/// rho0 composed with the exact inverse flow; no PDE solve.
DensityField deterministic_solution(double t, const InitialData& data, const SpatialGrid& grid);

struct BVRow {
  int cells = 0;
  double h = 0.0;
  double t = 0.0;
  double bv = 0.0;
};

/// Discrete BV on [-R, R]^2 of the closed-form solution per resolution.
std::vector<BVRow> bv_growth_experiment(const InitialData& data, double t, const std::vector<int>& resolutions,
                                        double R = 3.0);

struct StochasticBVRow {
  int cells = 0;
  double h = 0.0;
  double t = 0.0;
  double mean = 0.0;
  double std = 0.0;
  int paths = 0;
  std::vector<double> samples;
};

struct StochasticCounterpartOptions {
  double dt_over_h = 1.0;  // time step as a multiple of h at the finest level
  int velocity_cells = 4;
  double R = 3.0;
  bool zero_noise = false;
};

/// BGK runs with the cusp field, f(r) = r and noise over M paths. All levels
/// use the same underlying paths: coarse increments are sums of fine ones.
std::vector<StochasticBVRow> stochastic_counterpart(const InitialData& data, double t,
                                                    const std::vector<int>& resolutions, int paths,
                                                    std::uint64_t master_seed,
                                                    const StochasticCounterpartOptions& opt = {});

/// Path with consecutive groups of `factor` increments summed.
BrownianPath coarsen(const BrownianPath& path, int factor);

}  // namespace sbgk
