#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sbgk/audit.hpp"
#include "sbgk/bgk.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

inline constexpr const char* kVersionStamp = "sbgk 0.1.0";

struct ProblemConfig {
  int dim = 1;
  std::string flux = "burgers";  // burgers | linear
  double flux_slope = 1.0;
  std::string field = "constant";  // zero | constant | sine | shear | cusp
  Point field_value{1.0, 0.0};
  double field_amplitude = 0.5;
  std::string initial = "riemann";  // riemann | bump | cusp | cusp_smooth
  double a = -1.0;
  double b = 0.0;
  double height = 1.0;
  Point center{0.0, 0.0};
  double width = 1.0;
};

struct ConvergenceConfig {
  std::vector<int> cells;  // refinement ladder; dt, eps and n_v scale with h
  int oracle_cells = 16384;
  double cfl = 0.9;
};

struct CounterexampleConfig {
  double t = 1.0;
  std::vector<int> deterministic_cells{128, 256, 512, 1024};
  std::vector<int> stochastic_cells{128, 256, 512};
  int paths = 64;
  double R = 3.0;
  double dt_over_h = 1.0;
  int velocity_cells = 4;
  int figure_cells = 256;
};

struct PathStatsConfig {
  double dt = 1.0 / 65536.0;
  double horizon = 1.0;
  std::vector<double> deltas{1.0 / 16384.0};
  int count = 100;
  std::vector<int> dims{1, 2};
};

struct AuditToggles {
  bool entropy = true;
  double entropy_scale = kEntropyTolScale;
  bool kinetic = false;
  bool picard = false;
};

struct RunConfig {
  std::string experiment;
  bool has_problem = false;
  ProblemConfig problem;
  BGKConfig bgk;
  std::vector<double> epsilon_ladder;
  std::uint64_t seed = 0;
  int paths = 1;
  bool zero_noise = false;
  AuditToggles audit;
  bool has_convergence = false;
  ConvergenceConfig convergence;
  bool has_counterexample = false;
  CounterexampleConfig counterexample;
  bool has_paths = false;
  PathStatsConfig path_stats;
};

/// Parses and validates a JSON document. Errors name the offending field
/// path, e.g. "missing field /grid/cells".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& file);
/// Fully resolved configuration as pretty-printed JSON with sorted keys.
std::string config_json(const RunConfig& config);

ProblemSpec build_problem(const ProblemConfig& config);
/// The path of a single-path run (zero when zero_noise is set).
BrownianPath build_path(const RunConfig& config);

std::uint64_t fnv1a(std::string_view bytes);

/// Files of one run, committed together: written into a sibling temporary
/// directory and renamed into place after manifest.json.
class Bundle {
 public:
  void add(const std::string& name, std::string content);
  const std::map<std::string, std::string>& files() const { return files_; }
  void commit(const std::filesystem::path& dir, const RunConfig& config) const;

 private:
  std::map<std::string, std::string> files_;
};

struct CommandResult {
  int exit_code = 0;  // 0 all pass, 1 audit failure
  AuditReport report;
};

/// Runs the audit battery on a trajectory. Checks that need data the
/// trajectory does not carry are reported as skipped.
AuditReport audit_trajectory(const Trajectory& traj, const RunConfig& config);

std::string trajectory_csv(const Trajectory& traj);
std::string diagnostics_csv(const Trajectory& traj);
std::string defect_csv(const Trajectory& traj);

/// Rebuilds a trajectory from a committed bundle. Throws ConfigError for
/// missing files or a missing manifest.
Trajectory load_bundle(const std::filesystem::path& dir, RunConfig& config, AuditReport& integrity);

CommandResult cmd_simulate(const RunConfig& config, const std::filesystem::path& out);
CommandResult cmd_convergence(const RunConfig& config, const std::filesystem::path& out);
CommandResult cmd_counterexample(const RunConfig& config, const std::filesystem::path& out);
CommandResult cmd_audit(const std::filesystem::path& bundle, const std::filesystem::path& out);
CommandResult cmd_paths(const RunConfig& config, const std::filesystem::path& out);

/// 2 for configuration errors, 3 for numerical aborts.
int exit_code_for(const std::exception& e);

}  // namespace sbgk
