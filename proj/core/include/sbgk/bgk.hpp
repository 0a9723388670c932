#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sbgk/brownian.hpp"
#include "sbgk/grid.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

struct BGKConfig {
  double epsilon = 0.05;
  double dt = 0.01;
  double T = 1.0;
  int cells = 256;            // per axis
  int velocity_cells = 64;
  double half_width = 0.0;    // 0: padded box from the problem data
  double velocity_bound = 0.0;  // 0: max |rho0| of the sampled data
  int snapshot_stride = 1;
  bool keep_kinetic = false;
  bool keep_defect_field = false;
  // Fixed-point mode.
  double T1 = 0.0;            // window length, 0: whole horizon
  double picard_tol = 1e-10;
  int picard_max_iters = 60;

  int steps() const;
  /// Throws ConfigError on invalid values; returns non-fatal warnings.
  std::vector<std::string> validate() const;
};

/// Kinetic defect measure m = (1/eps) int_{-inf}^v (chi_rho - u) dr,
/// integrated exactly over each relaxation slab. Entries are kept at the
/// upper velocity edge of each cell.
struct DefectAccumulator {
  std::vector<double> slab_mass;  // per step: sum h^d dv P
  std::vector<std::vector<double>> windows;  // per snapshot window, cells * n_v
  double total = 0.0;
  double min_entry = 0.0;
  double max_support = 0.0;  // largest |v edge| carrying nonzero mass

  static constexpr double kClamp = 1e-12;
  static constexpr double kViolation = 1e-8;
};

struct Trajectory {
  std::shared_ptr<const ProblemSpec> spec;
  std::shared_ptr<const BrownianPath> path;
  BGKConfig config;
  VelocityGrid vgrid;
  std::vector<int> steps;  // step index of each snapshot
  std::vector<double> times;
  std::vector<DensityField> density;
  std::vector<KineticField> kinetic;  // empty unless keep_kinetic
  std::vector<double> kinetic_l1;     // ||u(t)||_L1 per snapshot
  std::vector<double> gap;            // ||u - chi_rho||_L1 per snapshot
  double gap_integral = 0.0;          // int_0^T ||u - chi_rho||_L1 dt
  DefectAccumulator defect;

  const SpatialGrid& grid() const { return density.front().grid; }
};

/// Semi-Lagrangian step u~(x, v) = u(X_{t+dt,t}(x), v) over path slab k,
/// with clamped linear (bilinear) interpolation and zero outside the box.
KineticField transport_substep(const KineticField& u, int k, const BrownianPath& path, const ProblemSpec& spec);

/// u <- a u~ + (1 - a) chi(rho~), a = exp(-dt/eps), clamped between u~ and
/// chi. If gap is given it receives ||u - chi_rho||_L1 of the result.
KineticField relax_substep(const KineticField& u_tilde, double epsilon, double dt, double* gap = nullptr);

/// Adds the slab defect between the two fields; returns the slab mass.
/// Throws StructuralViolation on entries below -1e-8.
double accumulate_defect(const KineticField& before, const KineticField& after, DefectAccumulator& acc,
                         std::vector<double>* window = nullptr);

/// One transport + relaxation step from path node k; returns slab defect mass.
double step(KineticField& u, int k, const BGKConfig& config, const BrownianPath& path, const ProblemSpec& spec,
            DefectAccumulator& acc, std::vector<double>* window = nullptr, double* gap = nullptr);

/// Grids used by run_simulation for the given data.
SpatialGrid simulation_grid(const ProblemSpec& spec, const BGKConfig& config);
VelocityGrid simulation_vgrid(const DensityField& rho0, const BGKConfig& config);

Trajectory run_simulation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path);
/// Same, from explicit gridded initial data on an explicit velocity grid.
Trajectory run_simulation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path,
                          const DensityField& rho0, const VelocityGrid& vgrid);

/// Contraction bound exp(T1 C0)(1 - exp(-T1/eps)) of the fixed-point map.
double picard_bound(double T1, double C0, double epsilon);

struct PicardResult {
  Trajectory trajectory;
  std::vector<double> sweep_changes;  // sup_t ||u^{m+1} - u^m||_L1 per sweep, all windows
  double contraction = 0.0;           // largest successive ratio observed
  double bound = 0.0;
  int windows = 0;
  bool converged = true;
};

/// Fixed-point iteration of the mild form on windows of length T1: the
/// relaxation source is integrated with the right-endpoint rule along
/// multi-step inverse characteristics.
PicardResult picard_solve(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path);

struct ContinuationLevel {
  double epsilon = 0.0;
  double gap_integral = 0.0;  // int ||u_eps - chi_{rho_eps}||_L1 dt
  double final_gap = 0.0;
  double cauchy = 0.0;        // ||rho_eps(T) - rho_{prev eps}(T)||_L1; 0 for the first level
};

struct ContinuationReport {
  std::vector<ContinuationLevel> levels;
  std::vector<std::string> warnings;
  bool gap_decreasing = false;
  bool cauchy_decreasing = false;
};

ContinuationReport epsilon_continuation(const ProblemSpec& spec, const BGKConfig& config, const BrownianPath& path,
                                        const std::vector<double>& eps_list);

}  // namespace sbgk
