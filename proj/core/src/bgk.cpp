#include "sbgk/bgk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"
#include "sbgk/flow.hpp"
#include "sbgk/interpolate.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/parallel.hpp"

namespace sbgk {

int BGKConfig::steps() const { return step_count(dt, T); }

std::vector<std::string> BGKConfig::validate() const {
  std::vector<std::string> warnings;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("bgk.epsilon must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("bgk.dt must be positive");
  if (!(T > 0.0) || dt > T * (1.0 + 1e-12)) throw ConfigError("bgk.T must be at least dt");
  if (cells < 4) throw ConfigError("grid.cells must be at least 4");
  if (velocity_cells < 4 || velocity_cells % 2) throw ConfigError("grid.velocity_cells must be even and at least 4");
  if (half_width < 0.0) throw ConfigError("grid.half_width must be nonnegative");
  if (velocity_bound < 0.0) throw ConfigError("grid.velocity_bound must be nonnegative");
  if (snapshot_stride < 1) throw ConfigError("bgk.snapshot_stride must be at least 1");
  if (T1 < 0.0) throw ConfigError("bgk.T1 must be nonnegative");
  if (!(picard_tol > 0.0)) throw ConfigError("bgk.picard_tol must be positive");
  if (picard_max_iters < 1) throw ConfigError("bgk.picard_max_iters must be at least 1");
  if (dt > epsilon) warnings.push_back("dt exceeds epsilon; relaxation is under-resolved");
  if ((velocity_cells & (velocity_cells - 1)) != 0) {
    warnings.push_back("velocity_cells is not a power of two; the density round trip is exact only to rounding");
  }
  return warnings;
}

namespace {

constexpr std::size_t kGrain = 64;

void check_shapes(const KineticField& u, const BrownianPath& path, const ProblemSpec& spec) {
  if (u.sgrid.dim() != spec.dim || path.dim() != spec.dim) throw DimensionError("field, path and problem dimensions differ");
  if (u.values.size() != u.sgrid.size() * static_cast<std::size_t>(u.vgrid.cells())) {
    throw DimensionError("kinetic field storage does not match its grids");
  }
}

std::vector<double> velocity_speeds(const VelocityGrid& vg, const Flux& flux) {
  std::vector<double> fp(static_cast<std::size_t>(vg.cells()));
  for (int j = 0; j < vg.cells(); ++j) fp[j] = flux.df(vg.center(j));
  return fp;
}

// Uniform shift per velocity: the foot is x - s with s the same for every
// cell, so all cells share the interpolation weight.
void transport_uniform(const KineticField& u, KineticField& out, const Point& db, double dt,
                       const std::vector<double>& fp, const Point& c) {
  const SpatialGrid& g = u.sgrid;
  const long n = g.cells_per_axis();
  const int nv = u.vgrid.cells();
  std::vector<long> off[2];
  std::vector<double> th[2];
  for (int a = 0; a < g.dim(); ++a) {
    off[a].resize(nv);
    th[a].resize(nv);
    for (int j = 0; j < nv; ++j) {
      double shift = -(db[a] + dt * fp[j] * c[a]) / g.h();
      if (!std::isfinite(shift)) throw NumericalError("non-finite characteristic foot");
      double fl = std::floor(shift);
      th[a][j] = shift - fl;
      off[a][j] = static_cast<long>(std::clamp(fl, -2.0 * n - 4.0, 2.0 * n + 4.0));
    }
  }
  const double* src = u.values.data();
  double* dst = out.values.data();
  if (g.dim() == 1) {
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t b, std::size_t e) {
          for (std::size_t i = b; i < e; ++i) {
            for (int j = 0; j < nv; ++j) {
              long a0 = static_cast<long>(i) + off[0][j];
              double p = (a0 >= 0 && a0 < n) ? src[a0 * nv + j] : 0.0;
              double q = (a0 + 1 >= 0 && a0 + 1 < n) ? src[(a0 + 1) * nv + j] : 0.0;
              dst[i * nv + j] = lerp_clamped(p, q, th[0][j]);
            }
          }
        },
        kGrain);
    return;
  }
  parallel_for(
      static_cast<std::size_t>(n * n),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t flat = b; flat < e; ++flat) {
          long ix = static_cast<long>(flat) % n;
          long iy = static_cast<long>(flat) / n;
          for (int j = 0; j < nv; ++j) {
            long ax = ix + off[0][j];
            long ay = iy + off[1][j];
            auto val = [&](long x, long y) {
              if (x < 0 || x >= n || y < 0 || y >= n) return 0.0;
              return src[(y * n + x) * nv + j];
            };
            dst[flat * nv + j] =
                bilerp_clamped(val(ax, ay), val(ax + 1, ay), val(ax, ay + 1), val(ax + 1, ay + 1), th[0][j], th[1][j]);
          }
        }
      },
      kGrain);
}

void transport_general(const KineticField& u, KineticField& out, const Point& db, double dt,
                       const std::vector<double>& fp, const TransportField& field) {
  const SpatialGrid& g = u.sgrid;
  const long n = g.cells_per_axis();
  const int nv = u.vgrid.cells();
  const double* src = u.values.data();
  double* dst = out.values.data();
  parallel_for(
      g.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t flat = b; flat < e; ++flat) {
          Point x = g.center_point(flat);
          Point bx = field.b(x);
          Stencil sx, sy;
          for (int j = 0; j < nv; ++j) {
            if (j == 0 || fp[j] != fp[j - 1]) {
              Point foot = inverse_step(x, db, dt, fp[j], bx);
              if (!std::isfinite(foot[0]) || !std::isfinite(foot[1])) throw NumericalError("non-finite characteristic foot");
              sx = locate(g, foot[0]);
              if (g.dim() == 2) sy = locate(g, foot[1]);
            }
            if (g.dim() == 1) {
              double p = (sx.a >= 0 && sx.a < n) ? src[sx.a * nv + j] : 0.0;
              double q = (sx.a + 1 >= 0 && sx.a + 1 < n) ? src[(sx.a + 1) * nv + j] : 0.0;
              dst[flat * nv + j] = lerp_clamped(p, q, sx.theta);
            } else {
              auto val = [&](long x0, long y0) {
                if (x0 < 0 || x0 >= n || y0 < 0 || y0 >= n) return 0.0;
                return src[(y0 * n + x0) * nv + j];
              };
              dst[flat * nv + j] = bilerp_clamped(val(sx.a, sy.a), val(sx.a + 1, sy.a), val(sx.a, sy.a + 1),
                                                  val(sx.a + 1, sy.a + 1), sx.theta, sy.theta);
            }
          }
        }
      },
      kGrain);
}

}  // namespace

KineticField transport_substep(const KineticField& u, int k, const BrownianPath& path, const ProblemSpec& spec) {
  check_shapes(u, path, spec);
  KineticField out(u.sgrid, u.vgrid);
  const Point db = path.increment(k);
  const std::vector<double> fp = velocity_speeds(u.vgrid, spec.flux);
  if (spec.field.constant) {
    transport_uniform(u, out, db, path.dt(), fp, spec.field.value);
  } else {
    transport_general(u, out, db, path.dt(), fp, spec.field);
  }
  return out;
}

KineticField relax_substep(const KineticField& u_tilde, double epsilon, double dt, double* gap) {
  if (!(epsilon > 0.0) || !(dt > 0.0)) throw ConfigError("relaxation needs positive epsilon and dt");
  KineticField out(u_tilde.sgrid, u_tilde.vgrid);
  const double a = std::exp(-dt / epsilon);
  const std::size_t nv = static_cast<std::size_t>(u_tilde.vgrid.cells());
  double total = parallel_sum(
      u_tilde.sgrid.size(),
      [&](std::size_t b, std::size_t e) {
        std::vector<double> chi(nv);
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) {
          auto src = u_tilde.cell(i);
          auto dst = out.cell(i);
          maxwellian_into(cell_density(src, u_tilde.vgrid), u_tilde.vgrid, chi);
          for (std::size_t j = 0; j < nv; ++j) {
            double v = a * src[j] + (1.0 - a) * chi[j];
            dst[j] = std::clamp(v, std::min(src[j], chi[j]), std::max(src[j], chi[j]));
            acc += std::abs(dst[j] - chi[j]);
          }
        }
        return acc;
      },
      kGrain);
  if (gap) *gap = total * u_tilde.sgrid.cell_volume() * u_tilde.vgrid.dv();
  return out;
}

double accumulate_defect(const KineticField& before, const KineticField& after, DefectAccumulator& acc,
                         std::vector<double>* window) {
  if (!(before.sgrid == after.sgrid) || !(before.vgrid == after.vgrid)) throw DimensionError("defect: grids differ");
  const std::size_t cells = before.sgrid.size();
  const int nv = before.vgrid.cells();
  const double dv = before.vgrid.dv();
  if (window && window->size() != cells * nv) window->assign(cells * nv, 0.0);
  const std::size_t chunks = (cells + kGrain - 1) / kGrain;
  std::vector<double> mass(chunks, 0.0), lowest(chunks, 0.0), support(chunks, 0.0);
  parallel_for(
      cells,
      [&](std::size_t b, std::size_t e) {
        std::size_t c = b / kGrain;
        for (std::size_t i = b; i < e; ++i) {
          auto ub = before.cell(i);
          auto ua = after.cell(i);
          double d = 0.0;
          for (int j = 0; j < nv; ++j) {
            d += ua[j] - ub[j];
            double p = dv * d;
            if (p < 0.0) {
              if (p < -DefectAccumulator::kViolation) {
                throw StructuralViolation("negative defect " + std::to_string(p) + " at cell " + std::to_string(i) +
                                          ", velocity cell " + std::to_string(j));
              }
              if (p > -DefectAccumulator::kClamp) p = 0.0;
              lowest[c] = std::min(lowest[c], p);
            }
            if (p != 0.0) support[c] = std::max(support[c], std::abs(before.vgrid.upper_edge(j)));
            mass[c] += p;
            if (window) (*window)[i * nv + j] += p;
          }
        }
      },
      kGrain);
  double slab = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    slab += mass[c];
    acc.min_entry = std::min(acc.min_entry, lowest[c]);
    acc.max_support = std::max(acc.max_support, support[c]);
  }
  slab *= before.sgrid.cell_volume() * dv;
  acc.slab_mass.push_back(slab);
  acc.total += slab;
  return slab;
}

double step(KineticField& u, int k, const BGKConfig& config, const BrownianPath& path, const ProblemSpec& spec,
            DefectAccumulator& acc, std::vector<double>* window, double* gap) {
  KineticField ut = transport_substep(u, k, path, spec);
  KineticField next = relax_substep(ut, config.epsilon, config.dt, gap);
  double m = accumulate_defect(ut, next, acc, window);
  u = std::move(next);
  return m;
}

SpatialGrid simulation_grid(const ProblemSpec& spec, const BGKConfig& config) {
  if (config.half_width > 0.0) return SpatialGrid(spec.dim, config.half_width, config.cells);
  double bound = spec.initial.sup > 0.0 ? spec.initial.sup : 1.0;
  return padded_grid(spec, bound, config.T, config.cells);
}

VelocityGrid simulation_vgrid(const DensityField& rho0, const BGKConfig& config) {
  double m = rho0.max_abs();
  if (config.velocity_bound > 0.0) {
    if (config.velocity_bound < m) throw ConfigError("grid.velocity_bound is below max |rho0|");
    return VelocityGrid(config.velocity_bound, config.velocity_cells);
  }
  return VelocityGrid::for_data(m, config.velocity_cells);
}

Trajectory run_simulation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path) {
  spec.validate();
  config.validate();
  SpatialGrid grid = simulation_grid(spec, config);
  DensityField rho0 = sample_density(spec.initial.rho, grid);
  return run_simulation(spec, config, path, rho0, simulation_vgrid(rho0, config));
}

namespace {

void check_path(const BGKConfig& config, const BrownianPath& path, int steps) {
  if (std::abs(path.dt() - config.dt) > 1e-12 * config.dt) throw ConfigError("path dt differs from bgk.dt");
  if (path.steps() < steps) throw RangeError("path is shorter than the horizon");
}

void snapshot(Trajectory& tr, const KineticField& u, int k, double gap) {
  tr.steps.push_back(k);
  tr.times.push_back(k * tr.config.dt);
  tr.density.push_back(density_from_kinetic(u));
  tr.kinetic_l1.push_back(kinetic_l1(u));
  tr.gap.push_back(gap);
  if (tr.config.keep_kinetic) tr.kinetic.push_back(u);
}

}  // namespace

Trajectory run_simulation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path,
                          const DensityField& rho0, const VelocityGrid& vgrid) {
  config.validate();
  if (rho0.grid.dim() != spec.dim) throw DimensionError("initial data dimension differs from the problem");
  const int steps = config.steps();
  check_path(config, path, steps);
  Trajectory tr;
  tr.spec = std::make_shared<const ProblemSpec>(spec);
  tr.path = std::make_shared<const BrownianPath>(path);
  tr.config = config;
  tr.vgrid = vgrid;
  KineticField u = lift(rho0, vgrid);
  snapshot(tr, u, 0, equilibrium_gap(u));
  const int stride = config.snapshot_stride;
  if (config.keep_defect_field) tr.defect.windows.resize(static_cast<std::size_t>((steps + stride - 1) / stride));
  for (int k = 0; k < steps; ++k) {
    std::vector<double>* window = config.keep_defect_field ? &tr.defect.windows[static_cast<std::size_t>(k / stride)] : nullptr;
    double gap = 0.0;
    step(u, k, config, path, spec, tr.defect, window, &gap);
    tr.gap_integral += config.dt * gap;
    if ((k + 1) % stride == 0 || k + 1 == steps) snapshot(tr, u, k + 1, gap);
  }
  return tr;
}

double picard_bound(double T1, double C0, double epsilon) {
  return std::exp(T1 * C0) * (1.0 - std::exp(-T1 / epsilon));
}

namespace {

// Cell value of chi_rho on velocity cell j, without the range check.
double chi_cell(double rho, int j, const VelocityGrid& vg) {
  const int half = vg.cells() / 2;
  double w = rho / vg.dv();
  if (j >= half) return std::clamp(w - (j - half), 0.0, 1.0);
  return -std::clamp(-w - (half - 1 - j), 0.0, 1.0);
}

struct FootTable {
  // For each target step k (relative to the window start, 1..K), source step
  // l (0..k) and velocity group: stencil per cell. Index via at().
  int K = 0;
  int groups = 0;
  std::size_t cells = 0;
  std::vector<Stencil> sx, sy;
  std::size_t offset(int k, int l) const { return (static_cast<std::size_t>(k) * (k + 1) / 2 + l); }
  std::size_t at(int k, int l, int g, std::size_t i) const {
    return ((offset(k, l) * groups + g) * cells) + i;
  }
};

}  // namespace

PicardResult picard_solve(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path) {
  spec.validate();
  config.validate();
  const int steps = config.steps();
  check_path(config, path, steps);
  const double T1 = config.T1 > 0.0 ? std::min(config.T1, config.T) : config.T;
  const int K = std::max(1, static_cast<int>(std::llround(T1 / config.dt)));
  const double bound_N = spec.initial.sup > 0.0 ? spec.initial.sup : 1.0;

  SpatialGrid grid = simulation_grid(spec, config);
  DensityField rho0 = sample_density(spec.initial.rho, grid);
  VelocityGrid vg = simulation_vgrid(rho0, config);
  const std::size_t cells = grid.size();
  const int nv = vg.cells();
  const long n = grid.cells_per_axis();
  const double dt = config.dt;
  const double eps = config.epsilon;

  PicardResult res;
  res.bound = picard_bound(K * dt, spec.C0(std::max(bound_N, vg.bound())), eps);
  Trajectory& tr = res.trajectory;
  tr.spec = std::make_shared<const ProblemSpec>(spec);
  tr.path = std::make_shared<const BrownianPath>(path);
  tr.config = config;
  tr.vgrid = vg;

  // Velocity groups sharing f'.
  std::vector<double> fp = velocity_speeds(vg, spec.flux);
  std::vector<int> group(nv);
  std::vector<double> group_fp;
  for (int j = 0; j < nv; ++j) {
    if (j == 0 || fp[j] != fp[j - 1]) group_fp.push_back(fp[j]);
    group[j] = static_cast<int>(group_fp.size()) - 1;
  }
  const int G = static_cast<int>(group_fp.size());

  KineticField u_start = lift(rho0, vg);
  snapshot(tr, u_start, 0, equilibrium_gap(u_start));

  auto sample_at = [&](const std::vector<double>& f, std::size_t stride, std::size_t comp, const Stencil& sx,
                       const Stencil& sy) {
    auto val = [&](long x, long y) {
      if (x < 0 || x >= n || y < 0 || y >= n) return 0.0;
      return f[static_cast<std::size_t>(y * n + x) * stride + comp];
    };
    if (grid.dim() == 1) return lerp_clamped(val(sx.a, 0), val(sx.a + 1, 0), sx.theta);
    return bilerp_clamped(val(sx.a, sy.a), val(sx.a + 1, sy.a), val(sx.a, sy.a + 1), val(sx.a + 1, sy.a + 1), sx.theta,
                          sy.theta);
  };

  int k0 = 0;
  while (k0 < steps) {
    const int Kw = std::min(K, steps - k0);
    ++res.windows;
    // Feet X_{t_k, t_l}(x) by composing one-step inverses backwards from t_k.
    FootTable ft;
    ft.K = Kw;
    ft.groups = G;
    ft.cells = cells;
    std::size_t total = ft.offset(Kw, Kw) + 1;
    ft.sx.resize(total * G * cells);
    if (grid.dim() == 2) ft.sy.resize(total * G * cells);
    parallel_for(cells, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Point x0 = grid.center_point(i);
        for (int g = 0; g < G; ++g) {
          for (int k = 1; k <= Kw; ++k) {
            Point y = x0;
            for (int l = k; l >= 0; --l) {
              if (l < k) {
                Point bx = spec.field.b(y);
                y = inverse_step(y, path.increment(k0 + l), dt, group_fp[g], bx);
              }
              std::size_t idx = ft.at(k, l, g, i);
              ft.sx[idx] = locate(grid, y[0]);
              if (grid.dim() == 2) ft.sy[idx] = locate(grid, y[1]);
            }
          }
        }
      }
    });

    DensityField rho_start = density_from_kinetic(u_start);
    std::vector<std::vector<double>> rho(Kw + 1, rho_start.values);  // rho(t_{k0 + l})
    std::vector<std::vector<double>> u_prev(Kw + 1), u_next(Kw + 1);
    double prev_change = -1.0;
    bool done = false;
    for (int it = 0; it < config.picard_max_iters && !done; ++it) {
      for (int k = 1; k <= Kw; ++k) {
        u_next[k].assign(cells * nv, 0.0);
        const double restart = std::exp(-k * dt / eps);
        parallel_for(cells, [&](std::size_t b, std::size_t e) {
          for (std::size_t i = b; i < e; ++i) {
            for (int j = 0; j < nv; ++j) {
              const int g = group[j];
              std::size_t s0 = ft.at(k, 0, g, i);
              double val = restart * sample_at(u_start.values, nv, j, ft.sx[s0], grid.dim() == 2 ? ft.sy[s0] : Stencil{});
              for (int l = 1; l <= k; ++l) {
                double w = std::exp(-(k - l) * dt / eps) * (1.0 - std::exp(-dt / eps));
                std::size_t sl = ft.at(k, l, g, i);
                double r = sample_at(rho[l], 1, 0, ft.sx[sl], grid.dim() == 2 ? ft.sy[sl] : Stencil{});
                val += w * chi_cell(r, j, vg);
              }
              u_next[k][i * nv + j] = val;
            }
          }
        });
      }
      double change = 0.0;
      if (it > 0) {
        for (int k = 1; k <= Kw; ++k) {
          double acc = 0.0;
          for (std::size_t q = 0; q < u_next[k].size(); ++q) acc += std::abs(u_next[k][q] - u_prev[k][q]);
          change = std::max(change, acc * grid.cell_volume() * vg.dv());
        }
        res.sweep_changes.push_back(change);
        if (prev_change > 1e-11 && change > 1e-11) res.contraction = std::max(res.contraction, change / prev_change);
        if (!std::isfinite(change)) throw NumericalError("fixed-point iteration produced non-finite values");
        prev_change = change;
        if (change < config.picard_tol) done = true;
      }
      for (int k = 1; k <= Kw; ++k) {
        for (std::size_t i = 0; i < cells; ++i) {
          std::span<const double> c(u_next[k].data() + i * nv, static_cast<std::size_t>(nv));
          rho[k][i] = cell_density(c, vg);
        }
      }
      std::swap(u_prev, u_next);
    }
    if (!done) res.converged = false;
    for (int k = 1; k <= Kw; ++k) {
      KineticField u(grid, vg);
      u.values = u_prev[k];
      int step_index = k0 + k;
      if (step_index % config.snapshot_stride == 0 || step_index == steps) snapshot(tr, u, step_index, equilibrium_gap(u));
      if (k == Kw) u_start = std::move(u);
    }
    k0 += Kw;
  }
  return res;
}

ContinuationReport epsilon_continuation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path,
                                        const std::vector<double>& eps_list) {
  if (eps_list.size() < 2) throw ConfigError("continuation needs at least two epsilon values");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw ConfigError("continuation epsilons must be strictly decreasing");
  }
  ContinuationReport rep;
  DensityField prev;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    BGKConfig c = config;
    c.epsilon = eps_list[i];
    c.keep_kinetic = false;
    c.keep_defect_field = false;
    for (auto& w : c.validate()) rep.warnings.push_back("epsilon " + std::to_string(eps_list[i]) + ": " + w);
    Trajectory tr = run_simulation(spec, c, path);
    ContinuationLevel lvl;
    lvl.epsilon = eps_list[i];
    lvl.gap_integral = tr.gap_integral;
    lvl.final_gap = tr.gap.back();
    if (i > 0) lvl.cauchy = l1_distance(tr.density.back(), prev);
    prev = tr.density.back();
    rep.levels.push_back(lvl);
  }
  rep.gap_decreasing = true;
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    if (!(rep.levels[i].gap_integral < rep.levels[i - 1].gap_integral)) rep.gap_decreasing = false;
  }
  rep.cauchy_decreasing = rep.levels.size() >= 3;
  for (std::size_t i = 2; i < rep.levels.size(); ++i) {
    if (!(rep.levels[i].cauchy < rep.levels[i - 1].cauchy)) rep.cauchy_decreasing = false;
  }
  return rep;
}

}  // namespace sbgk
