#include "sbgk/audit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sbgk/csv.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"

namespace sbgk {

bool AuditReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult& AuditReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ConfigError("no check named " + name);
}

void AuditReport::write_csv(std::ostream& os) const {
  csv::write_row(os, {"check", "measured", "bound", "tol", "status"});
  for (const auto& c : checks) {
    csv::write_row(os, {c.name, csv::format(c.measured), csv::format(c.bound), csv::format(c.tol),
                        c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL")});
  }
}

std::string AuditReport::table() const {
  std::ostringstream os;
  auto cell = [&os](const std::string& s, int w) { os << std::left << std::setw(w) << s << ' '; };
  cell("check", 28);
  cell("measured", 24);
  cell("bound", 24);
  cell("tol", 12);
  os << "status\n";
  for (const auto& c : checks) {
    cell(c.name, 28);
    cell(csv::format(c.measured), 24);
    cell(csv::format(c.bound), 24);
    cell(csv::format(c.tol), 12);
    os << (c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL"));
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }
  return os.str();
}

namespace {

double bump1(double x, double c, double w) {
  double s = (x - c) / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * s));
}

double bump1_prime(double x, double c, double w) {
  double s = (x - c) / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return -0.5 * std::numbers::pi / w * std::sin(std::numbers::pi * s);
}

}  // namespace

double SpatialBump::operator()(const Point& x) const {
  double v = bump1(x[0], center[0], width);
  if (dim == 2) v *= bump1(x[1], center[1], width);
  return v;
}

Point SpatialBump::grad(const Point& x) const {
  if (dim == 1) return {bump1_prime(x[0], center[0], width), 0.0};
  double px = bump1(x[0], center[0], width), py = bump1(x[1], center[1], width);
  return {bump1_prime(x[0], center[0], width) * py, px * bump1_prime(x[1], center[1], width)};
}

Region SpatialBump::support() const {
  return Region{{center[0] - width, center[1] - width}, {center[0] + width, center[1] + width}};
}

double TemporalRamp::operator()(double t) const {
  if (t <= t1) return 1.0;
  if (t >= t1 + width) return 0.0;
  return 1.0 - (t - t1) / width;
}

double VelocityCutoff::operator()(double v) const {
  double a = std::abs(v);
  if (a <= k) return 1.0;
  if (a >= 2.0 * k) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (a - k) / k));
}

double Entropy::eta(double rho) const {
  double v = c0 * rho;
  for (const auto& [c, k] : terms) v += c * std::abs(rho - k);
  return v;
}

double Entropy::q(double rho, const Flux& flux) const {
  double fr = flux.f(rho);
  double v = c0 * fr;
  for (const auto& [c, k] : terms) v += c * sgn(rho - k) * (fr - flux.f(k));
  return v;
}

std::string Entropy::label() const {
  std::ostringstream os;
  os << csv::format(c0) << "*rho";
  for (const auto& [c, k] : terms) os << "+" << csv::format(c) << "*|rho-" << csv::format(k) << "|";
  return os.str();
}

std::vector<Entropy> entropy_family(const std::vector<double>& levels) {
  std::vector<Entropy> fam{{1.0, {}}, {-1.0, {}}};
  for (double k : levels) fam.push_back({0.0, {{1.0, k}}});
  return fam;
}

namespace {

void check_test_support(const SpatialBump& phi, const SpatialGrid& g) {
  Region s = phi.support();
  double lim = g.half_width() - 2.0 * g.h();
  for (int a = 0; a < g.dim(); ++a) {
    if (s.lo[a] < -lim || s.hi[a] > lim) throw ConfigError("test function support touches the box boundary");
  }
}

struct SpatialWeights {
  std::vector<double> phi, dphi_x, dphi_y, div_b_phi;
};

SpatialWeights spatial_weights(const SpatialGrid& g, const ProblemSpec& spec, const SpatialBump& phi) {
  SpatialWeights w;
  const std::size_t n = g.size();
  w.phi.resize(n);
  w.dphi_x.resize(n);
  w.dphi_y.resize(n);
  w.div_b_phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point x = g.center_point(i);
    double p = phi(x);
    Point gp = phi.grad(x);
    w.phi[i] = p;
    w.dphi_x[i] = gp[0];
    w.dphi_y[i] = gp[1];
    if (p == 0.0 && gp[0] == 0.0 && gp[1] == 0.0) {
      w.div_b_phi[i] = 0.0;
    } else {
      Point b = spec.field.b(x);
      w.div_b_phi[i] = p * spec.field.div_b(x) + b[0] * gp[0] + b[1] * gp[1];
    }
  }
  return w;
}

Point path_increment(const BrownianPath& path, double t0, double t1) {
  Point a = path.position(path.node(t0));
  Point b = path.position(path.node(t1));
  return {b[0] - a[0], b[1] - a[1]};
}

}  // namespace

EntropyResidual entropy_residual(const std::vector<DensityField>& fields, const std::vector<double>& times,
                                 const BrownianPath& path, const ProblemSpec& spec, const std::vector<Entropy>& family,
                                 const SpatialBump& phi, const TemporalRamp& psi) {
  if (fields.size() != times.size() || fields.size() < 2) throw ConfigError("entropy residual needs matching snapshots");
  if (family.empty()) throw ConfigError("entropy family is empty");
  const SpatialGrid& g = fields.front().grid;
  check_test_support(phi, g);
  SpatialWeights w = spatial_weights(g, spec, phi);
  const double vol = g.cell_volume();
  EntropyResidual out;
  out.worst = std::numeric_limits<double>::infinity();
  const std::size_t M = fields.size();
  for (const Entropy& ent : family) {
    std::vector<double> E(M), F(M), Hx(M), Hy(M);
    for (std::size_t m = 0; m < M; ++m) {
      double e = 0, f = 0, hx = 0, hy = 0;
      const auto& r = fields[m].values;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (w.phi[i] == 0.0 && w.dphi_x[i] == 0.0 && w.dphi_y[i] == 0.0) continue;
        double et = ent.eta(r[i]);
        e += w.phi[i] * et;
        f += ent.q(r[i], spec.flux) * w.div_b_phi[i];
        hx += w.dphi_x[i] * et;
        hy += w.dphi_y[i] * et;
      }
      E[m] = e * vol;
      F[m] = f * vol;
      Hx[m] = hx * vol;
      Hy[m] = hy * vol;
    }
    double R = psi(times[0]) * E[0];
    for (std::size_t m = 0; m + 1 < M; ++m) {
      double p0 = psi(times[m]), p1 = psi(times[m + 1]);
      double dt = times[m + 1] - times[m];
      Point db = path_increment(path, times[m], times[m + 1]);
      R += (p1 - p0) * 0.5 * (E[m] + E[m + 1]);
      R += dt * 0.5 * (p0 * F[m] + p1 * F[m + 1]);
      R += db[0] * 0.5 * (p0 * Hx[m] + p1 * Hx[m + 1]);
      R += db[1] * 0.5 * (p0 * Hy[m] + p1 * Hy[m + 1]);
    }
    out.per_entropy.push_back(R);
    out.worst = std::min(out.worst, R);
  }
  return out;
}

EntropyResidual entropy_residual(const Trajectory& traj, const std::vector<Entropy>& family, const SpatialBump& phi,
                                 const TemporalRamp& psi) {
  return entropy_residual(traj.density, traj.times, *traj.path, *traj.spec, family, phi, psi);
}

double kinetic_residual(const Trajectory& traj, const SpatialBump& phi, const std::function<double(double)>& psi) {
  const std::size_t M = traj.density.size();
  if (traj.kinetic.size() != M) throw ConfigError("kinetic residual needs kinetic snapshots");
  if (traj.defect.windows.size() + 1 != M) throw ConfigError("kinetic residual needs one defect window per snapshot gap");
  const SpatialGrid& g = traj.grid();
  check_test_support(phi, g);
  const ProblemSpec& spec = *traj.spec;
  const VelocityGrid& vg = traj.vgrid;
  const int nv = vg.cells();
  SpatialWeights w = spatial_weights(g, spec, phi);
  std::vector<double> psi_v(nv), fp(nv);
  for (int j = 0; j < nv; ++j) {
    psi_v[j] = psi(vg.center(j));
    fp[j] = spec.flux.df(vg.center(j));
  }
  const double vol = g.cell_volume();
  const double dv = vg.dv();
  auto moments = [&](const KineticField& u, double& mass, double& adv, double& gx, double& gy) {
    mass = adv = gx = gy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (w.phi[i] == 0.0 && w.dphi_x[i] == 0.0 && w.dphi_y[i] == 0.0) continue;
      auto c = u.cell(i);
      double s = 0.0, sf = 0.0;
      for (int j = 0; j < nv; ++j) {
        s += psi_v[j] * c[j];
        sf += fp[j] * psi_v[j] * c[j];
      }
      mass += w.phi[i] * s;
      adv += w.div_b_phi[i] * sf;
      gx += w.dphi_x[i] * s;
      gy += w.dphi_y[i] * s;
    }
    mass *= vol * dv;
    adv *= vol * dv;
    gx *= vol * dv;
    gy *= vol * dv;
  };
  std::vector<double> mass(M), adv(M), gx(M), gy(M);
  for (std::size_t m = 0; m < M; ++m) moments(traj.kinetic[m], mass[m], adv[m], gx[m], gy[m]);
  double rhs = mass[0];
  for (std::size_t m = 0; m + 1 < M; ++m) {
    double dt = traj.times[m + 1] - traj.times[m];
    Point db = path_increment(*traj.path, traj.times[m], traj.times[m + 1]);
    rhs += dt * 0.5 * (adv[m] + adv[m + 1]);
    rhs += db[0] * 0.5 * (gx[m] + gx[m + 1]) + db[1] * 0.5 * (gy[m] + gy[m + 1]);
  }
  double pairing = 0.0;
  for (const auto& win : traj.defect.windows) {
    if (win.empty()) continue;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (w.phi[i] == 0.0) continue;
      double s = 0.0;
      for (int j = 0; j + 1 < nv; ++j) s += win[i * nv + j] * (psi_v[j + 1] - psi_v[j]);
      pairing += w.phi[i] * s;
    }
  }
  rhs -= pairing * vol;
  return mass[M - 1] - rhs;
}

CheckResult check_max_principle(const Trajectory& traj) {
  CheckResult c;
  c.name = "max_principle";
  c.bound = traj.density.front().max_abs();
  for (const auto& d : traj.density) c.measured = std::max(c.measured, d.max_abs());
  c.pass = c.measured <= c.bound;
  return c;
}

CheckResult check_l1_growth(const Trajectory& traj) {
  CheckResult c;
  c.name = "l1_growth";
  c.tol = 1e-6;
  const double rho0 = lp_norm(traj.density.front(), Norm::L1);
  const double C0 = traj.spec->C0(traj.vgrid.bound());
  c.bound = 1.0;
  bool ordered = true;
  for (std::size_t m = 0; m < traj.density.size(); ++m) {
    double r = lp_norm(traj.density[m], Norm::L1);
    double u = traj.kinetic_l1[m];
    if (r > u * (1.0 + 1e-12) + 1e-300) ordered = false;
    double env = std::exp(C0 * traj.times[m]) * rho0;
    double ratio = env > 0.0 ? u / env : (u > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    c.measured = std::max(c.measured, ratio);
  }
  c.pass = ordered && c.measured <= 1.0 + c.tol;
  if (!ordered) c.note = "||rho|| exceeded ||u||";
  return c;
}

CheckResult check_l1_equality(const Trajectory& traj) {
  CheckResult c;
  c.name = "l1_equality";
  c.tol = 1e-10;
  const double rho0 = lp_norm(traj.density.front(), Norm::L1);
  for (double u : traj.kinetic_l1) {
    double d = rho0 > 0.0 ? std::abs(u - rho0) / rho0 : std::abs(u);
    c.measured = std::max(c.measured, d);
  }
  c.pass = c.measured <= c.tol;
  return c;
}

CheckResult check_bv_nonincrease(const Trajectory& traj) {
  CheckResult c;
  c.name = "bv_nonincrease";
  c.tol = 1e-8;
  if (!traj.spec->field.constant) {
    c.skipped = true;
    c.pass = true;
    c.note = "field is x-dependent";
    return c;
  }
  c.bound = discrete_bv(traj.density.front());
  for (const auto& d : traj.density) c.measured = std::max(c.measured, discrete_bv(d));
  c.pass = c.measured <= c.bound * (1.0 + c.tol);
  return c;
}

double defect_envelope(double N, double C0, double T, double rho0_l1) {
  double e = std::exp(2.0 * C0 * T);
  return 12.0 * N * N * (e + 1.0 + C0 * C0 * T * T * e) * rho0_l1 * rho0_l1;
}

CheckResult check_defect_structure(const Trajectory& traj) {
  CheckResult c;
  c.name = "defect_structure";
  c.tol = DefectAccumulator::kClamp;
  const double N = traj.vgrid.bound();
  c.measured = traj.defect.total;
  c.bound = defect_envelope(N, traj.spec->C0(N), traj.times.back(), lp_norm(traj.density.front(), Norm::L1));
  bool nonneg = traj.defect.min_entry >= -c.tol;
  bool support = traj.defect.max_support <= N;
  c.pass = nonneg && support && c.measured <= c.bound;
  std::ostringstream os;
  os << "min=" << csv::format(traj.defect.min_entry) << " support=" << csv::format(traj.defect.max_support);
  c.note = os.str();
  return c;
}

CheckResult check_energy_defect_identity(const Trajectory& traj) {
  CheckResult c;
  c.name = "energy_defect";
  if (!traj.spec->field.div_free) {
    c.skipped = true;
    c.pass = true;
    c.note = "field is not divergence free";
    return c;
  }
  double a = lp_norm(traj.density.front(), Norm::L2);
  double b = lp_norm(traj.density.back(), Norm::L2);
  c.tol = 0.05;
  c.bound = c.tol * a * a;
  c.measured = std::abs(2.0 * traj.defect.total - (a * a - b * b));
  c.pass = c.measured <= c.bound;
  std::ostringstream os;
  os << "2m=" << csv::format(2.0 * traj.defect.total) << " drop=" << csv::format(a * a - b * b);
  c.note = os.str();
  return c;
}

CheckResult check_comparison(const Trajectory& lower, const Trajectory& upper) {
  if (lower.density.size() != upper.density.size()) throw ConfigError("comparison runs have different snapshot counts");
  if (!(lower.grid() == upper.grid())) throw ConfigError("comparison runs use different grids");
  if (lower.path->increments() != upper.path->increments()) throw ConfigError("comparison runs use different paths");
  CheckResult c;
  c.name = "comparison";
  c.tol = 1e-10;
  c.bound = -c.tol;
  c.measured = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < lower.density.size(); ++m) {
    const auto& a = lower.density[m].values;
    const auto& b = upper.density[m].values;
    for (std::size_t i = 0; i < a.size(); ++i) c.measured = std::min(c.measured, b[i] - a[i]);
  }
  c.pass = c.measured >= c.bound;
  return c;
}

HolderFit fit_holder_exponent(const std::vector<const Trajectory*>& trajs, const Region& region) {
  if (trajs.empty()) throw ConfigError("Holder fit needs a trajectory");
  const Trajectory& t0 = *trajs.front();
  const std::size_t M = t0.density.size();
  if (M < 3) throw ConfigError("Holder fit needs snapshots");
  const double ds = t0.times[1] - t0.times[0];
  const double T = t0.times.back();
  const double dt = t0.config.dt;
  HolderFit fit;
  for (std::size_t lag = 1; lag < M; lag *= 2) {
    double tau = lag * ds;
    if (tau < 4.0 * dt * (1.0 - 1e-9)) continue;
    if (tau > T / 8.0 * (1.0 + 1e-9)) break;
    double acc = 0.0;
    std::size_t count = 0;
    for (const Trajectory* tr : trajs) {
      if (tr->density.size() != M) throw ConfigError("Holder fit trajectories differ in length");
      for (std::size_t m = 0; m + lag < M; ++m) {
        acc += l1_distance(tr->density[m], tr->density[m + lag], region);
        ++count;
      }
    }
    fit.lags.push_back(tau);
    fit.moduli.push_back(acc / count);
  }
  if (fit.lags.size() < 2) throw ConfigError("Holder fit needs at least two lags in [4 dt, T/8]");
  for (double m : fit.moduli) {
    if (!(m > 0.0)) fit.degenerate = true;
  }
  if (fit.degenerate) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.lags.size());
  for (std::size_t i = 0; i < fit.lags.size(); ++i) {
    double x = std::log(fit.lags[i]), y = std::log(fit.moduli[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.C = std::exp((sy - fit.alpha * sx) / n);
  return fit;
}

HolderFit fit_holder_exponent(const Trajectory& traj, const Region& region) {
  return fit_holder_exponent(std::vector<const Trajectory*>{&traj}, region);
}

namespace {

constexpr double kKernelRadius = 0.70710678118654752440;  // support [-a, a]^2 lies in the unit ball

double kernel_1d_prime(double s) {
  const double a = kKernelRadius;
  if (std::abs(s) >= a) return 0.0;
  return -0.5 * std::numbers::pi / (a * a) * std::sin(std::numbers::pi * s / a);
}

}  // namespace

double commutator_kernel_1d(double s) {
  const double a = kKernelRadius;
  if (std::abs(s) >= a) return 0.0;
  return 0.5 / a * (1.0 + std::cos(std::numbers::pi * s / a));
}

double kernel_moment_I(int samples) {
  const double a = kKernelRadius;
  const double h = 2.0 * a / samples;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    double z1 = -a + (i + 0.5) * h;
    for (int j = 0; j < samples; ++j) {
      double z2 = -a + (j + 0.5) * h;
      double g1 = kernel_1d_prime(z1) * commutator_kernel_1d(z2);
      double g2 = commutator_kernel_1d(z1) * kernel_1d_prime(z2);
      acc += std::hypot(z1, z2) * std::hypot(g1, g2);
    }
  }
  return acc * h * h;
}

CommutatorTable commutator_experiment(const CommutatorSetup& setup, const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw ConfigError("commutator experiment needs epsilons");
  const double h = setup.h;
  for (double e : eps_list) {
    if (!(h < e / 4.0)) throw ConfigError("commutator grid under-resolved: need h < eps/4");
  }
  const double emax = *std::max_element(eps_list.begin(), eps_list.end());
  const double margin = kKernelRadius * emax + 4.0 * h;
  const double ox = setup.Q.lo[0] - margin, oy = setup.Q.lo[1] - margin;
  const int nx = static_cast<int>(std::ceil((setup.Q.hi[0] + margin - ox) / h));
  const int ny = static_cast<int>(std::ceil((setup.Q.hi[1] + margin - oy) / h));
  auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  auto cx = [&](int i) { return ox + (i + 0.5) * h; };
  auto cy = [&](int j) { return oy + (j + 0.5) * h; };
  const std::size_t N = static_cast<std::size_t>(nx) * ny;
  std::vector<double> w(N), bx(N), by(N), D(N, 0.0);
  CommutatorTable tab;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      Point p{cx(i), cy(j)};
      w[idx(i, j)] = setup.w(p);
      Point b = setup.b(p);
      bx[idx(i, j)] = b[0];
      by[idx(i, j)] = b[1];
      tab.L = std::max(tab.L, std::abs(w[idx(i, j)]));
    }
  }
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      double gx = (w[idx(i + 1, j)] - w[idx(i - 1, j)]) / (2.0 * h);
      double gy = (w[idx(i, j + 1)] - w[idx(i, j - 1)]) / (2.0 * h);
      D[idx(i, j)] = bx[idx(i, j)] * gx + by[idx(i, j)] * gy;
    }
  }
  auto inQ = [&](int i, int j) { return setup.Q.contains({cx(i), cy(j)}, 2); };
  for (double eps : eps_list) {
    const int R = static_cast<int>(std::ceil(kKernelRadius * eps / h));
    std::vector<double> K(2 * R + 1);
    for (int m = -R; m <= R; ++m) K[m + R] = h * commutator_kernel_1d(m * h / eps) / eps;
    auto convolve = [&](const std::vector<double>& f) {
      std::vector<double> tmp(N, 0.0), out(N, 0.0);
      for (int j = 0; j < ny; ++j) {
        for (int i = R; i + R < nx; ++i) {
          double s = 0.0;
          for (int m = -R; m <= R; ++m) s += K[m + R] * f[idx(i + m, j)];
          tmp[idx(i, j)] = s;
        }
      }
      for (int j = R; j + R < ny; ++j) {
        for (int i = R; i + R < nx; ++i) {
          double s = 0.0;
          for (int m = -R; m <= R; ++m) s += K[m + R] * tmp[idx(i, j + m)];
          out[idx(i, j)] = s;
        }
      }
      return out;
    };
    std::vector<double> CD = convolve(D), Cw = convolve(w);
    CommutatorRow row;
    row.epsilon = eps;
    row.identically_zero = true;
    double acc = 0.0;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!inQ(i, j)) continue;
        double gx = (Cw[idx(i + 1, j)] - Cw[idx(i - 1, j)]) / (2.0 * h);
        double gy = (Cw[idx(i, j + 1)] - Cw[idx(i, j - 1)]) / (2.0 * h);
        double r = CD[idx(i, j)] - (bx[idx(i, j)] * gx + by[idx(i, j)] * gy);
        if (r != 0.0) row.identically_zero = false;
        acc += std::abs(r);
      }
    }
    row.integral = acc * h * h;
    tab.rows.push_back(row);
  }
  for (std::size_t i = 1; i < tab.rows.size(); ++i) {
    tab.decay.push_back(tab.rows[i].integral > 0.0 ? tab.rows[i - 1].integral / tab.rows[i].integral
                                                   : std::numeric_limits<double>::infinity());
  }
  tab.I_kernel = kernel_moment_I();
  if (setup.grad_b) {
    const double q = h / 4.0;
    const int mx = static_cast<int>(std::ceil((setup.Q.hi[0] - setup.Q.lo[0]) / q));
    const int my = static_cast<int>(std::ceil((setup.Q.hi[1] - setup.Q.lo[1]) / q));
    const double qx = (setup.Q.hi[0] - setup.Q.lo[0]) / mx, qy = (setup.Q.hi[1] - setup.Q.lo[1]) / my;
    double acc = 0.0;
    for (int j = 0; j < my; ++j) {
      for (int i = 0; i < mx; ++i) {
        auto J = setup.grad_b({setup.Q.lo[0] + (i + 0.5) * qx, setup.Q.lo[1] + (j + 0.5) * qy});
        acc += std::sqrt(J[0] * J[0] + J[1] * J[1] + J[2] * J[2] + J[3] * J[3]);
      }
    }
    tab.Db_abs = acc * qx * qy;
  }
  tab.envelope = tab.L * (2.0 + tab.I_kernel) * tab.Db_abs;
  return tab;
}

}  // namespace sbgk

namespace sbgk {

double entropy_tolerance(double h, double dt, double epsilon, double scale) { return scale * (h + dt + epsilon); }

CheckResult check_entropy(const Trajectory& traj, double scale) {
  const SpatialGrid& g = traj.grid();
  const double N = traj.vgrid.bound();
  const double T = traj.times.back();
  SpatialBump phi{{0.0, 0.0}, 0.8 * (g.half_width() - 2.0 * g.h()), g.dim()};
  TemporalRamp psi{0.25 * T, 0.5 * T};
  auto fam = entropy_family({-0.5 * N, 0.0, 0.5 * N});
  EntropyResidual r = entropy_residual(traj, fam, phi, psi);
  CheckResult c;
  c.name = "entropy_residual";
  c.measured = r.worst;
  c.tol = entropy_tolerance(g.h(), traj.config.dt, traj.config.epsilon, scale);
  c.bound = -c.tol;
  c.pass = c.measured >= c.bound;
  return c;
}

}  // namespace sbgk
