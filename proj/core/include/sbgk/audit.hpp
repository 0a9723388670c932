#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sbgk/bgk.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

inline constexpr double kEntropyTolScale = 1.0;

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double measured = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  std::string note;
};

struct AuditReport {
  std::vector<CheckResult> checks;

  void add(CheckResult c) { checks.push_back(std::move(c)); }
  bool all_pass() const;
  const CheckResult& find(const std::string& name) const;
  /// CSV columns check,measured,bound,tol,status.
  void write_csv(std::ostream& os) const;
  std::string table() const;
};

/// Nonnegative tensor-product cosine bump with support centre +- width.
struct SpatialBump {
  Point center{0.0, 0.0};
  double width = 1.0;
  int dim = 1;

  double operator()(const Point& x) const;
  Point grad(const Point& x) const;
  Region support() const;
};

/// 1 on [0, t1], linear down to 0 over [t1, t1 + width], 0 afterwards.
struct TemporalRamp {
  double t1 = 0.0;
  double width = 1.0;

  double operator()(double t) const;
};

/// xi_k(v): 1 for |v| <= k, 0 for |v| >= 2k, cosine in between.
struct VelocityCutoff {
  double k = 1.0;

  double operator()(double v) const;
};

/// eta(rho) = c0 rho + sum c_k |rho - rho_k|.
struct Entropy {
  double c0 = 0.0;
  std::vector<std::pair<double, double>> terms;  // (c_k, rho_k)

  double eta(double rho) const;
  double q(double rho, const Flux& flux) const;
  std::string label() const;
};

/// {rho, -rho} and |rho - k| for each level.
std::vector<Entropy> entropy_family(const std::vector<double>& levels);

struct EntropyResidual {
  double worst = 0.0;
  std::vector<double> per_entropy;
};

/// Discretised entropy inequality tested against phi(x) psi(t): time
/// derivative, flux term with div(b phi), initial term, and the
/// Stratonovich term by midpoint sums on the path increments between
/// snapshots. Returns the most negative value over the family.
EntropyResidual entropy_residual(const Trajectory& traj, const std::vector<Entropy>& family, const SpatialBump& phi,
                                 const TemporalRamp& psi);

/// Same evaluation on a bare sequence of density fields on the path nodes
/// times[m] (used for hand-built fields).
EntropyResidual entropy_residual(const std::vector<DensityField>& fields, const std::vector<double>& times,
                                 const BrownianPath& path, const ProblemSpec& spec, const std::vector<Entropy>& family,
                                 const SpatialBump& phi, const TemporalRamp& psi);

/// Imbalance of the kinetic weak form at the final snapshot for test
/// functions phi(x) psi(v); needs kinetic snapshots and defect windows.
double kinetic_residual(const Trajectory& traj, const SpatialBump& phi, const std::function<double(double)>& psi);

CheckResult check_max_principle(const Trajectory& traj);
/// ||rho|| <= ||u|| <= exp(C0 t)||rho0|| (1 + 1e-6) at every snapshot.
CheckResult check_l1_growth(const Trajectory& traj);
/// max_t | ||u(t)|| - ||rho0|| | / ||rho0|| against 1e-10.
CheckResult check_l1_equality(const Trajectory& traj);
CheckResult check_bv_nonincrease(const Trajectory& traj);
/// Nonnegativity, velocity support and the uniform mass envelope.
CheckResult check_defect_structure(const Trajectory& traj);
double defect_envelope(double N, double C0, double T, double rho0_l1);
CheckResult check_energy_defect_identity(const Trajectory& traj);
CheckResult check_comparison(const Trajectory& lower, const Trajectory& upper);

/// Admissible entropy deficit C (h + dt + eps) for the discrete residual.
double entropy_tolerance(double h, double dt, double epsilon, double scale = kEntropyTolScale);

/// Worst residual over +-rho and |rho - k| for a few levels k, with a bump
/// covering the inner box and a ramp over the second quarter of [0, T].
CheckResult check_entropy(const Trajectory& traj, double scale = kEntropyTolScale);

struct HolderFit {
  double alpha = 0.0;
  double C = 0.0;
  bool degenerate = false;
  std::vector<double> lags;
  std::vector<double> moduli;
};

/// Mean over t of ||rho(t) - rho(t + tau)||_L1(region) at dyadic lags
/// tau in [4 dt, T/8], averaged over the given trajectories.
HolderFit fit_holder_exponent(const std::vector<const Trajectory*>& trajs, const Region& region);
HolderFit fit_holder_exponent(const Trajectory& traj, const Region& region);

struct CommutatorSetup {
  VectorField b;
  ScalarField div_b;
  /// Row-major Jacobian (db_i/dx_j) for |Db|(Q).
  std::function<std::array<double, 4>(const Point&)> grad_b;
  ScalarField w;
  Region Q;
  double h = 0.01;
};

struct CommutatorRow {
  double epsilon = 0.0;
  double integral = 0.0;  // int_Q |r_eps|
  bool identically_zero = false;
};

struct CommutatorTable {
  std::vector<CommutatorRow> rows;
  double L = 0.0;            // sup |w|
  double I_kernel = 0.0;     // int |z| |grad rho1|
  double Db_abs = 0.0;       // int_Q |Db| (Frobenius)
  double envelope = 0.0;     // L (d + I) |Db|(Q)
  std::vector<double> decay; // ratios between consecutive rows
};

/// Tensor-product cosine kernel scaled into the unit ball.
double commutator_kernel_1d(double s);
double kernel_moment_I(int samples = 400);

/// r_eps = (b . grad w) * rho_eps - b . grad(w * rho_eps) by discrete
/// convolution and central differences on a 2D grid of spacing h.
/// Throws ConfigError if h >= eps / 4.
CommutatorTable commutator_experiment(const CommutatorSetup& setup, const std::vector<double>& eps_list);

}  // namespace sbgk
