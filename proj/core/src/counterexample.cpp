#include "sbgk/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/parallel.hpp"

namespace sbgk {

namespace cusp {

double b1(double x) {
  if (x < 0.0) return 0.0;
  if (x <= 1.0) return std::sqrt(x);
  return 1.0 / std::sqrt(x);
}

double b1_prime(double x) {
  if (x <= 0.0) return 0.0;
  if (x <= 1.0) return 0.5 / std::sqrt(x);
  return -0.5 * std::pow(x, -1.5);
}

double b2(double y) { return y >= 0.0 ? y / (1.0 + y * y) : 0.0; }

double b2_prime(double y) {
  if (y < 0.0) return 0.0;
  double d = 1.0 + y * y;
  return (1.0 - y * y) / (d * d);
}

double g(double y) {
  if (y < 0.0 || std::isnan(y)) throw DomainError("g is defined on y >= 0");
  return std::exp(y * y) * y * y;
}

double g_prime(double y) {
  if (y < 0.0 || std::isnan(y)) throw DomainError("g is defined on y >= 0");
  return 2.0 * y * (1.0 + y * y) * std::exp(y * y);
}

double g_inverse(double w) {
  if (w < 0.0 || std::isnan(w)) throw DomainError("g_inverse needs w >= 0");
  if (w == 0.0) return 0.0;
  if (std::isinf(w)) return w;
  // g(y) >= y^2, so the root lies in [0, sqrt(w)].
  double lo = 0.0, hi = std::sqrt(w);
  for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < w ? lo : hi) = mid;
  }
  double y = 0.5 * (lo + hi);
  const double tol = 1e-12 * std::max(1.0, w);
  for (int it = 0; it < 50; ++it) {
    double r = g(y) - w;
    if (std::abs(r) <= tol) break;
    double next = y - r / g_prime(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (g(next) < w ? lo : hi) = next;
    y = next;
  }
  return y;
}

Point exact_flow(double t, const Point& p) {
  if (t < 0.0) throw DomainError("exact flow needs t >= 0");
  if (p[1] < 0.0) return p;
  return {p[0], g_inverse(g(p[1]) * std::exp(2.0 * b1(p[0]) * t))};
}

Point exact_inverse_flow(double t, const Point& p) {
  if (t < 0.0) throw DomainError("exact flow needs t >= 0");
  if (p[1] < 0.0) return p;
  return {p[0], g_inverse(g(p[1]) * std::exp(-2.0 * b1(p[0]) * t))};
}

double rho01(double x) {
  if (x <= 0.0 || x >= 3.0) return 0.0;
  if (x <= 1.0) return std::sqrt(x);
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (x - 1.0) / 2.0));
}

double rho01_smooth(double x) {
  if (x <= 0.0 || x >= 3.0) return 0.0;
  double s = std::sin(std::numbers::pi * x / 3.0);
  return s * s;
}

double rho02(double y) {
  if (y <= 0.0 || y >= 2.0) return 0.0;
  double s = std::sin(std::numbers::pi * y / 2.0);
  return s * s;
}

}  // namespace cusp

DensityField deterministic_solution(double t, const InitialData& data, const SpatialGrid& grid) {
  if (grid.dim() != 2) throw DimensionError("the explicit flow is two dimensional");
  DensityField out(grid);
  parallel_for(out.values.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out.values[i] = data.rho(cusp::exact_inverse_flow(t, grid.center_point(i)));
  });
  return out;
}

std::vector<BVRow> bv_growth_experiment(const InitialData& data, double t, const std::vector<int>& resolutions,
                                        double R) {
  if (t < 0.0) throw DomainError("bv growth needs t >= 0");
  std::vector<BVRow> rows;
  for (int n : resolutions) {
    SpatialGrid grid(2, R, n);
    DensityField rho = deterministic_solution(t, data, grid);
    rows.push_back({n, grid.h(), t, discrete_bv(rho)});
  }
  return rows;
}

BrownianPath coarsen(const BrownianPath& path, int factor) {
  if (factor < 1 || path.steps() % factor != 0) throw ConfigError("coarsening factor must divide the step count");
  const int d = path.dim();
  std::vector<double> inc(static_cast<std::size_t>(path.steps() / factor) * d, 0.0);
  for (int k = 0; k < path.steps(); ++k) {
    Point p = path.increment(k);
    for (int a = 0; a < d; ++a) inc[static_cast<std::size_t>(k / factor) * d + a] += p[a];
  }
  return BrownianPath(d, path.dt() * factor, path.seed(), std::move(inc));
}

std::vector<StochasticBVRow> stochastic_counterpart(const InitialData& data, double t,
                                                    const std::vector<int>& resolutions, int paths,
                                                    std::uint64_t master_seed,
                                                    const StochasticCounterpartOptions& opt) {
  if (!(t > 0.0)) throw ConfigError("stochastic counterpart needs t > 0");
  if (resolutions.empty() || paths < 1) throw ConfigError("stochastic counterpart needs resolutions and paths");
  ProblemSpec spec = make_problem(Flux::linear_flux(1.0), fields::cusp_2d(), data);
  const int finest = *std::max_element(resolutions.begin(), resolutions.end());
  for (int n : resolutions) {
    if (finest % n != 0) throw ConfigError("resolutions must divide the finest one");
  }
  BGKConfig base;
  base.T = t;
  base.cells = finest;
  base.velocity_cells = opt.velocity_cells;
  const SpatialGrid fine = simulation_grid(spec, base);
  int steps = static_cast<int>(std::ceil(t / (opt.dt_over_h * fine.h())));
  const int coarsest = *std::min_element(resolutions.begin(), resolutions.end());
  const int max_factor = finest / coarsest;
  steps = ((steps + max_factor - 1) / max_factor) * max_factor;
  const double dt_fine = t / steps;
  std::vector<BrownianPath> fine_paths =
      opt.zero_noise ? std::vector<BrownianPath>(static_cast<std::size_t>(paths), BrownianPath::zero(2, dt_fine, t))
                     : sample_paths(master_seed, paths, dt_fine, t, 2);
  const Region region{{-opt.R, -opt.R}, {opt.R, opt.R}};
  std::vector<StochasticBVRow> rows;
  for (int n : resolutions) {
    const int factor = finest / n;
    BGKConfig cfg = base;
    cfg.cells = n;
    cfg.dt = dt_fine * factor;
    cfg.epsilon = cfg.dt;
    cfg.snapshot_stride = steps / factor;
    StochasticBVRow row;
    row.cells = n;
    row.t = t;
    row.paths = paths;
    for (const auto& fp : fine_paths) {
      BrownianPath p = coarsen(fp, factor);
      Trajectory tr = run_simulation(spec, cfg, p);
      row.h = tr.grid().h();
      row.samples.push_back(discrete_bv(tr.density.back(), region));
    }
    double sum = 0.0;
    for (double s : row.samples) sum += s;
    row.mean = sum / paths;
    double var = 0.0;
    for (double s : row.samples) var += (s - row.mean) * (s - row.mean);
    row.std = paths > 1 ? std::sqrt(var / (paths - 1)) : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sbgk
