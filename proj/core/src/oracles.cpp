#include "sbgk/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"
#include "sbgk/flow.hpp"

namespace sbgk {

double godunov_flux(const Flux& flux, double left, double right) {
  if (flux.linear) return flux.slope >= 0.0 ? flux.slope * left : flux.slope * right;
  if (!flux.convex) throw ConfigError("Godunov flux needs a convex flux");
  if (left <= right) return flux.f(std::clamp(flux.argmin, left, right));
  return std::max(flux.f(left), flux.f(right));
}

namespace {

double sup_speed(const Flux& flux, const DensityField& rho0) {
  if (flux.linear) return std::abs(flux.slope);
  double lo = 0.0, hi = 0.0;
  for (double v : rho0.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::max(std::abs(flux.df(lo)), std::abs(flux.df(hi)));
}

}  // namespace

double godunov_dt(const Flux& flux, const DensityField& rho0, double T, double cfl) {
  double s = sup_speed(flux, rho0);
  double dt = s > 0.0 ? cfl * rho0.grid.h() / s : T;
  int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-12)));
  return T / steps;
}

GodunovRun godunov_solve(const Flux& flux, const DensityField& rho0, double dt, double T, int stride) {
  const SpatialGrid& g = rho0.grid;
  if (g.dim() != 1) throw DimensionError("Godunov oracle is 1D only");
  const double h = g.h();
  if (dt * sup_speed(flux, rho0) / h > 1.0 + 1e-12) throw ConfigError("Godunov CFL condition violated");
  const int steps = step_count(dt, T);
  const int n = g.cells_per_axis();
  GodunovRun run;
  run.dt = dt;
  run.times.push_back(0.0);
  run.snapshots.push_back(rho0);
  std::vector<double> u = rho0.values, next(u.size()), F(static_cast<std::size_t>(n + 1));
  const double lam = dt / h;
  for (int k = 0; k < steps; ++k) {
    for (int e = 0; e <= n; ++e) {
      double l = e > 0 ? u[e - 1] : 0.0;
      double r = e < n ? u[e] : 0.0;
      F[e] = godunov_flux(flux, l, r);
    }
    for (int i = 0; i < n; ++i) next[i] = u[i] - lam * (F[i + 1] - F[i]);
    std::swap(u, next);
    if ((stride > 0 && (k + 1) % stride == 0) || k + 1 == steps) {
      DensityField s(g);
      s.values = u;
      run.times.push_back((k + 1) * dt);
      run.snapshots.push_back(std::move(s));
    }
  }
  return run;
}

double exact_riemann_burgers(double rho_l, double rho_r, double xi) {
  if (rho_l > rho_r) return xi < 0.5 * (rho_l + rho_r) ? rho_l : rho_r;
  return std::clamp(xi, rho_l, rho_r);
}

Flux scaled_flux(const Flux& flux, double c) {
  if (c < 0.0) throw ConfigError("scaled flux needs c >= 0");
  Flux out = flux;
  out.name = flux.name + "*c";
  auto f = flux.f;
  auto df = flux.df;
  out.f = [f, c](double r) { return c * f(r); };
  out.df = [df, c](double r) { return c * df(r); };
  out.slope = c * flux.slope;
  if (c == 0.0) {
    out.linear = true;
    out.slope = 0.0;
  }
  return out;
}

DensityField shift_reduction_oracle(const ProblemSpec& spec, const DensityField& rho0, const BrownianPath& path,
                                    double T, double cfl) {
  if (!spec.field.constant) throw ConfigError("shift reduction needs an x-independent flux (constant b)");
  if (spec.dim != 1 || rho0.grid.dim() != 1) throw DimensionError("shift reduction oracle is 1D only");
  Flux F = scaled_flux(spec.flux, spec.field.value[0]);
  double dt = godunov_dt(F, rho0, T, cfl);
  GodunovRun w = godunov_solve(F, rho0, dt, T);
  const DensityField& wT = w.snapshots.back();
  // Uniform offset in cell units, so node-aligned shifts are exact copies.
  const double q = -path.position(path.node(T))[0] / rho0.grid.h();
  const double fa = std::floor(q);
  const long a = static_cast<long>(fa);
  const double theta = q - fa;
  const long n = static_cast<long>(wT.values.size());
  auto at = [&](long j) { return j >= 0 && j < n ? wT.values[static_cast<std::size_t>(j)] : 0.0; };
  DensityField out(rho0.grid);
  for (long i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = (1.0 - theta) * at(i + a) + theta * at(i + a + 1);
  return out;
}

DensityField linear_characteristics_oracle(const ProblemSpec& spec, const SpatialGrid& grid, const BrownianPath& path,
                                           double t) {
  if (!spec.flux.linear || spec.flux.slope != 1.0) throw ConfigError("characteristics oracle needs f(r) = r");
  DensityField out(grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    FlowQuery q{0.0, t, grid.center_point(i), 0.0, FlowDirection::inverse};
    out.values[i] = spec.initial.rho(flow_inverse(q, path, spec));
  }
  return out;
}

double l1_error_on_fine(const DensityField& coarse, const DensityField& fine) {
  const SpatialGrid& c = coarse.grid;
  const SpatialGrid& f = fine.grid;
  if (c.dim() != 1 || f.dim() != 1) throw DimensionError("l1_error_on_fine is 1D only");
  if (c.half_width() != f.half_width() || f.cells_per_axis() % c.cells_per_axis() != 0) {
    throw DimensionError("fine grid is not a refinement of the coarse grid");
  }
  const int r = f.cells_per_axis() / c.cells_per_axis();
  double acc = 0.0;
  for (int i = 0; i < f.cells_per_axis(); ++i) acc += std::abs(coarse.values[i / r] - fine.values[i]);
  return acc * f.h();
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw ConfigError("rate fit needs at least two levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) throw NumericalError("rate fit needs positive values");
    double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace sbgk
