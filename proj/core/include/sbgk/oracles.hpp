#pragma once

#include <vector>

#include "sbgk/brownian.hpp"
#include "sbgk/flux.hpp"
#include "sbgk/grid.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

struct GodunovRun {
  std::vector<double> times;
  std::vector<DensityField> snapshots;
  double dt = 0.0;
};

/// Exact-Riemann-flux Godunov scheme for d_t rho + d_x F(rho) = 0 in 1D with
/// zero states outside the box. Snapshots every `stride` steps (0: initial
/// and final only). Throws ConfigError if dt sup|F'| / h > 1.
GodunovRun godunov_solve(const Flux& flux, const DensityField& rho0, double dt, double T, int stride = 0);

/// Largest stable step for the data range, times `cfl`, adjusted so the
/// horizon is a whole number of steps.
double godunov_dt(const Flux& flux, const DensityField& rho0, double T, double cfl);

/// Godunov numerical flux for a convex (or linear) flux.
double godunov_flux(const Flux& flux, double left, double right);

/// Entropy solution of Burgers' equation for Riemann data at xi = x / t.
double exact_riemann_burgers(double rho_l, double rho_r, double xi);

/// c F for a constant c >= 0 (the x-independent flux b f(rho)).
Flux scaled_flux(const Flux& flux, double c);

/// rho(T, x) = w(T, x - B(T)) with w the deterministic Godunov solution,
/// for constant b in 1D. Refuses x-dependent fields.
DensityField shift_reduction_oracle(const ProblemSpec& spec, const DensityField& rho0, const BrownianPath& path,
                                    double T, double cfl = 0.9);

/// rho(t, x) = rho0(X_{t,0}(x)) for a linear flux with slope 1.
DensityField linear_characteristics_oracle(const ProblemSpec& spec, const SpatialGrid& grid, const BrownianPath& path,
                                           double t);

/// L1 distance between a coarse 1D field, read as piecewise constant, and a
/// field on a nested finer grid of the same box.
double l1_error_on_fine(const DensityField& coarse, const DensityField& fine);

/// Least-squares slope of log(err) against log(h).
double fit_rate(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace sbgk
