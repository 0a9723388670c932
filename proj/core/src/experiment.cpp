#include "sbgk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "sbgk/brownian.hpp"
#include "sbgk/counterexample.hpp"
#include "sbgk/csv.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/kinetic.hpp"
#include "sbgk/oracles.hpp"

namespace sbgk {

using json = nlohmann::json;

namespace {

// Typed access to one JSON object with field paths in every error.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("field " + where() + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  Node child(const char* key) const { return Node(require(key), field(key)); }

  double number(const char* key) const {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError("field " + field(key) + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("field " + field(key) + ": not finite");
    return x;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const char* key) const {
    const json& v = require(key);
    if (!v.is_number_integer()) throw ConfigError("field " + field(key) + ": expected an integer");
    return v.get<long long>();
  }
  int integer(const char* key, int fallback) const { return has(key) ? static_cast<int>(integer(key)) : fallback; }

  std::uint64_t unsigned_integer(const char* key) const {
    const json& v = require(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError("field " + field(key) + ": expected a non-negative integer");
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError("field " + field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError("field " + field(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = require(key);
    if (!v.is_array()) throw ConfigError("field " + field(key) + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError("field " + field(key) + "/" + std::to_string(i) + ": expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<int> integers(const char* key) const {
    const json& v = require(key);
    if (!v.is_array()) throw ConfigError("field " + field(key) + ": expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        throw ConfigError("field " + field(key) + "/" + std::to_string(i) + ": expected an integer");
      }
      out.push_back(v[i].get<int>());
    }
    return out;
  }

  Point point(const char* key, Point fallback) const {
    if (!has(key)) return fallback;
    auto v = numbers(key);
    if (v.empty() || v.size() > 2) throw ConfigError("field " + field(key) + ": expected one or two numbers");
    return {v[0], v.size() > 1 ? v[1] : 0.0};
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
      if (!known) throw ConfigError("unknown field " + path_ + "/" + it.key());
    }
  }

  std::string field(const char* key) const { return path_ + "/" + key; }

 private:
  const json& require(const char* key) const {
    if (!j_.contains(key)) throw ConfigError("missing field " + field(key));
    return j_.at(key);
  }
  std::string where() const { return path_.empty() ? "/" : path_; }

  const json& j_;
  std::string path_;
};

void positive(double x, const std::string& field) {
  if (!(x > 0.0)) throw ConfigError("field " + field + ": must be positive");
}

ProblemConfig parse_problem(const Node& n) {
  n.allow({"dim", "flux", "field", "initial"});
  ProblemConfig p;
  p.dim = static_cast<int>(n.integer("dim"));
  if (p.dim != 1 && p.dim != 2) throw ConfigError("field /problem/dim: must be 1 or 2");

  Node flux = n.child("flux");
  flux.allow({"preset", "slope"});
  p.flux = flux.string("preset");
  if (p.flux != "burgers" && p.flux != "linear") throw ConfigError("field /problem/flux/preset: unknown preset " + p.flux);
  p.flux_slope = flux.number("slope", 1.0);

  Node field = n.child("field");
  field.allow({"preset", "value", "amplitude"});
  p.field = field.string("preset");
  static const std::set<std::string> fields{"zero", "constant", "sine", "shear", "cusp"};
  if (!fields.count(p.field)) throw ConfigError("field /problem/field/preset: unknown preset " + p.field);
  p.field_value = field.point("value", {1.0, 0.0});
  p.field_amplitude = field.number("amplitude", 0.5);

  Node init = n.child("initial");
  init.allow({"preset", "a", "b", "height", "center", "width"});
  p.initial = init.string("preset");
  static const std::set<std::string> inits{"riemann", "bump", "cusp", "cusp_smooth"};
  if (!inits.count(p.initial)) throw ConfigError("field /problem/initial/preset: unknown preset " + p.initial);
  p.a = init.number("a", -1.0);
  p.b = init.number("b", 0.0);
  p.height = init.number("height", 1.0);
  p.center = init.point("center", {0.0, 0.0});
  p.width = init.number("width", 1.0);
  if (p.initial == "riemann" && !(p.a < p.b)) throw ConfigError("field /problem/initial/b: must exceed a");
  if (p.initial == "bump") positive(p.width, "/problem/initial/width");
  return p;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Node root(doc, "");
  root.allow({"experiment", "problem", "grid", "bgk", "monte_carlo", "audit", "convergence", "counterexample",
              "paths"});
  RunConfig c;
  c.experiment = root.string("experiment");

  Node mc = root.child("monte_carlo");
  mc.allow({"seed", "paths", "zero_noise"});
  c.seed = mc.unsigned_integer("seed");
  c.paths = mc.integer("paths", 1);
  if (c.paths < 1) throw ConfigError("field /monte_carlo/paths: must be at least 1");
  c.zero_noise = mc.boolean("zero_noise", false);

  c.has_problem = root.has("problem");
  if (c.has_problem) {
    c.problem = parse_problem(root.child("problem"));
    Node grid = root.child("grid");
    grid.allow({"cells", "velocity_cells", "half_width", "velocity_bound"});
    c.bgk.cells = static_cast<int>(grid.integer("cells"));
    c.bgk.velocity_cells = static_cast<int>(grid.integer("velocity_cells"));
    c.bgk.half_width = grid.number("half_width", 0.0);
    c.bgk.velocity_bound = grid.number("velocity_bound", 0.0);

    Node bgk = root.child("bgk");
    bgk.allow({"epsilon", "dt", "T", "snapshot_stride", "epsilon_ladder", "T1", "picard_tol", "picard_max_iters"});
    c.bgk.epsilon = bgk.number("epsilon");
    c.bgk.dt = bgk.number("dt");
    c.bgk.T = bgk.number("T");
    c.bgk.snapshot_stride = bgk.integer("snapshot_stride", 1);
    c.bgk.T1 = bgk.number("T1", 0.0);
    c.bgk.picard_tol = bgk.number("picard_tol", 1e-10);
    c.bgk.picard_max_iters = bgk.integer("picard_max_iters", 60);
    if (bgk.has("epsilon_ladder")) {
      c.epsilon_ladder = bgk.numbers("epsilon_ladder");
      for (double e : c.epsilon_ladder) positive(e, "/bgk/epsilon_ladder");
    }
    try {
      c.bgk.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("section /bgk: ") + e.what());
    }
  } else {
    for (const char* k : {"grid", "bgk", "convergence"}) {
      if (root.has(k)) throw ConfigError("field /" + std::string(k) + ": requires /problem");
    }
  }

  if (root.has("audit")) {
    Node a = root.child("audit");
    a.allow({"entropy", "entropy_scale", "kinetic", "picard"});
    c.audit.entropy = a.boolean("entropy", true);
    c.audit.entropy_scale = a.number("entropy_scale", kEntropyTolScale);
    positive(c.audit.entropy_scale, "/audit/entropy_scale");
    c.audit.kinetic = a.boolean("kinetic", false);
    c.audit.picard = a.boolean("picard", false);
  }

  c.has_convergence = root.has("convergence");
  if (c.has_convergence) {
    Node n = root.child("convergence");
    n.allow({"cells", "oracle_cells", "cfl"});
    c.convergence.cells = n.integers("cells");
    c.convergence.oracle_cells = n.integer("oracle_cells", 16384);
    c.convergence.cfl = n.number("cfl", 0.9);
  }

  c.has_counterexample = root.has("counterexample");
  if (c.has_counterexample) {
    Node n = root.child("counterexample");
    n.allow({"t", "deterministic_cells", "stochastic_cells", "paths", "R", "dt_over_h", "velocity_cells",
             "figure_cells"});
    auto& x = c.counterexample;
    x.t = n.number("t", 1.0);
    positive(x.t, "/counterexample/t");
    if (n.has("deterministic_cells")) x.deterministic_cells = n.integers("deterministic_cells");
    if (n.has("stochastic_cells")) x.stochastic_cells = n.integers("stochastic_cells");
    x.paths = n.integer("paths", c.paths);
    x.R = n.number("R", 3.0);
    x.dt_over_h = n.number("dt_over_h", 1.0);
    x.velocity_cells = n.integer("velocity_cells", 4);
    x.figure_cells = n.integer("figure_cells", 256);
  }

  c.has_paths = root.has("paths");
  if (c.has_paths) {
    Node n = root.child("paths");
    n.allow({"dt", "horizon", "deltas", "count", "dims"});
    auto& p = c.path_stats;
    p.dt = n.number("dt");
    positive(p.dt, "/paths/dt");
    p.horizon = n.number("horizon");
    positive(p.horizon, "/paths/horizon");
    p.deltas = n.numbers("deltas");
    p.count = n.integer("count", c.paths);
    if (n.has("dims")) p.dims = n.integers("dims");
    for (int d : p.dims) {
      if (d != 1 && d != 2) throw ConfigError("field /paths/dims: entries must be 1 or 2");
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["monte_carlo"] = {{"seed", c.seed}, {"paths", c.paths}, {"zero_noise", c.zero_noise}};
  j["audit"] = {{"entropy", c.audit.entropy},
                {"entropy_scale", c.audit.entropy_scale},
                {"kinetic", c.audit.kinetic},
                {"picard", c.audit.picard}};
  if (c.has_problem) {
    const auto& p = c.problem;
    j["problem"] = {
        {"dim", p.dim},
        {"flux", {{"preset", p.flux}, {"slope", p.flux_slope}}},
        {"field", {{"preset", p.field}, {"value", {p.field_value[0], p.field_value[1]}}, {"amplitude", p.field_amplitude}}},
        {"initial",
         {{"preset", p.initial},
          {"a", p.a},
          {"b", p.b},
          {"height", p.height},
          {"center", {p.center[0], p.center[1]}},
          {"width", p.width}}}};
    j["grid"] = {{"cells", c.bgk.cells},
                 {"velocity_cells", c.bgk.velocity_cells},
                 {"half_width", c.bgk.half_width},
                 {"velocity_bound", c.bgk.velocity_bound}};
    j["bgk"] = {{"epsilon", c.bgk.epsilon},         {"dt", c.bgk.dt},
                {"T", c.bgk.T},                     {"snapshot_stride", c.bgk.snapshot_stride},
                {"epsilon_ladder", c.epsilon_ladder}, {"T1", c.bgk.T1},
                {"picard_tol", c.bgk.picard_tol},   {"picard_max_iters", c.bgk.picard_max_iters}};
  }
  if (c.has_convergence) {
    j["convergence"] = {
        {"cells", c.convergence.cells}, {"oracle_cells", c.convergence.oracle_cells}, {"cfl", c.convergence.cfl}};
  }
  if (c.has_counterexample) {
    const auto& x = c.counterexample;
    j["counterexample"] = {{"t", x.t},
                           {"deterministic_cells", x.deterministic_cells},
                           {"stochastic_cells", x.stochastic_cells},
                           {"paths", x.paths},
                           {"R", x.R},
                           {"dt_over_h", x.dt_over_h},
                           {"velocity_cells", x.velocity_cells},
                           {"figure_cells", x.figure_cells}};
  }
  if (c.has_paths) {
    const auto& p = c.path_stats;
    j["paths"] = {{"dt", p.dt}, {"horizon", p.horizon}, {"deltas", p.deltas}, {"count", p.count}, {"dims", p.dims}};
  }
  return j.dump(2) + "\n";
}

ProblemSpec build_problem(const ProblemConfig& p) {
  Flux flux = p.flux == "burgers" ? Flux::burgers() : Flux::linear_flux(p.flux_slope);
  TransportField field;
  if (p.field == "zero") {
    field = fields::zero(p.dim);
  } else if (p.field == "constant") {
    field = fields::constant(p.dim, p.field_value);
  } else if (p.field == "sine") {
    if (p.dim != 1) throw ConfigError("field /problem/field/preset: sine is one-dimensional");
    field = fields::sine_1d(p.field_amplitude);
  } else if (p.field == "shear") {
    if (p.dim != 2) throw ConfigError("field /problem/field/preset: shear is two-dimensional");
    field = fields::shear_2d(p.field_amplitude);
  } else {
    if (p.dim != 2) throw ConfigError("field /problem/field/preset: cusp is two-dimensional");
    field = fields::cusp_2d();
  }
  InitialData data;
  if (p.initial == "riemann") {
    if (p.dim != 1) throw ConfigError("field /problem/initial/preset: riemann is one-dimensional");
    data = data::pulse(p.a, p.b, p.height);
  } else if (p.initial == "bump") {
    data = data::cosine_bump(p.dim, p.center, p.width, p.height);
  } else {
    if (p.dim != 2) throw ConfigError("field /problem/initial/preset: " + p.initial + " is two-dimensional");
    data = p.initial == "cusp" ? data::cusp_product() : data::smooth_product();
  }
  ProblemSpec spec = make_problem(flux, field, data);
  spec.validate();
  return spec;
}

BrownianPath build_path(const RunConfig& c) {
  if (c.zero_noise) return BrownianPath::zero(c.problem.dim, c.bgk.dt, c.bgk.T);
  return sample_path(split_seed(c.seed, 0), c.bgk.dt, c.bgk.T, c.problem.dim);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + file.string());
}

}  // namespace

void Bundle::add(const std::string& name, std::string content) {
  if (name == "manifest.json") throw ConfigError("manifest.json is reserved");
  files_[name] = std::move(content);
}

void Bundle::commit(const std::filesystem::path& dir, const RunConfig& config) const {
  namespace fs = std::filesystem;
  if (dir.empty()) throw ConfigError("output directory is empty");
  fs::path target = fs::absolute(dir);
  fs::path parent = target.parent_path();
  fs::create_directories(parent);
  fs::path tmp = parent / ("." + target.filename().string() + ".partial");
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  std::string cfg = config_json(config);
  json manifest;
  manifest["version"] = kVersionStamp;
  manifest["seed"] = config.seed;
  manifest["config_hash"] = hex(fnv1a(cfg));
  manifest["files"] = json::object();
  spill(tmp / "config.json", cfg);
  manifest["files"]["config.json"] = hex(fnv1a(cfg));
  for (const auto& [name, content] : files_) {
    spill(tmp / name, content);
    manifest["files"][name] = hex(fnv1a(content));
  }
  spill(tmp / "manifest.json", manifest.dump(2) + "\n");
  fs::remove_all(target);
  fs::rename(tmp, target);
}

AuditReport audit_trajectory(const Trajectory& traj, const RunConfig& config) {
  AuditReport rep;
  const TransportField& field = traj.spec->field;
  rep.add(check_max_principle(traj));
  rep.add(check_l1_growth(traj));
  if (field.div_free) {
    rep.add(check_l1_equality(traj));
  } else {
    rep.add({"l1_equality", true, true, 0.0, 0.0, 0.0, "field is not divergence-free"});
  }
  rep.add(check_bv_nonincrease(traj));
  rep.add(check_defect_structure(traj));
  if (field.div_free) {
    rep.add(check_energy_defect_identity(traj));
  } else {
    rep.add({"energy_defect", true, true, 0.0, 0.0, 0.0, "field is not divergence-free"});
  }
  if (config.audit.entropy) rep.add(check_entropy(traj, config.audit.entropy_scale));
  if (config.audit.kinetic) {
    if (traj.kinetic.empty() || traj.defect.windows.empty()) {
      rep.add({"kinetic_residual", true, true, 0.0, 0.0, 0.0, "kinetic snapshots not stored"});
    } else {
      const SpatialGrid& g = traj.grid();
      SpatialBump phi{{0.0, 0.0}, 0.8 * (g.half_width() - 2.0 * g.h()), g.dim()};
      VelocityCutoff cut{0.5 * traj.vgrid.bound()};
      double r = kinetic_residual(traj, phi, [&](double v) { return cut(v) * v; });
      CheckResult c;
      c.name = "kinetic_residual";
      c.measured = std::abs(r);
      c.tol = entropy_tolerance(g.h(), traj.config.dt, traj.config.epsilon, config.audit.entropy_scale);
      c.bound = c.tol;
      c.pass = c.measured <= c.bound;
      rep.add(c);
    }
  }
  return rep;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  const SpatialGrid& g = traj.grid();
  if (g.dim() == 1) {
    csv::write_row(os, {"step", "time", "i", "x", "rho"});
  } else {
    csv::write_row(os, {"step", "time", "i", "x", "y", "rho"});
  }
  for (std::size_t m = 0; m < traj.density.size(); ++m) {
    const auto& r = traj.density[m].values;
    std::string st = csv::format(traj.steps[m]);
    std::string tm = csv::format(traj.times[m]);
    for (std::size_t i = 0; i < r.size(); ++i) {
      Point x = g.center_point(i);
      if (g.dim() == 1) {
        csv::write_row(os, {st, tm, csv::format(static_cast<std::int64_t>(i)), csv::format(x[0]), csv::format(r[i])});
      } else {
        csv::write_row(os, {st, tm, csv::format(static_cast<std::int64_t>(i)), csv::format(x[0]), csv::format(x[1]),
                            csv::format(r[i])});
      }
    }
  }
  return os.str();
}

std::string diagnostics_csv(const Trajectory& traj) {
  std::ostringstream os;
  csv::write_row(os, {"step", "time", "rho_l1", "rho_l2", "rho_linf", "u_l1", "gap", "bv"});
  for (std::size_t m = 0; m < traj.density.size(); ++m) {
    const auto& d = traj.density[m];
    csv::write_row(os, {csv::format(traj.steps[m]), csv::format(traj.times[m]), csv::format(lp_norm(d, Norm::L1)),
                        csv::format(lp_norm(d, Norm::L2)), csv::format(d.max_abs()), csv::format(traj.kinetic_l1[m]),
                        csv::format(m < traj.gap.size() ? traj.gap[m] : 0.0), csv::format(discrete_bv(d))});
  }
  return os.str();
}

std::string defect_csv(const Trajectory& traj) {
  std::ostringstream os;
  csv::write_row(os, {"step", "time", "slab_mass"});
  for (std::size_t k = 0; k < traj.defect.slab_mass.size(); ++k) {
    csv::write_row(os, {csv::format(static_cast<std::int64_t>(k + 1)), csv::format((k + 1) * traj.config.dt),
                        csv::format(traj.defect.slab_mass[k])});
  }
  return os.str();
}

namespace {

csv::Table read_table(const std::string& text) {
  std::istringstream is(text);
  return csv::read(is);
}

}  // namespace

Trajectory load_bundle(const std::filesystem::path& dir, RunConfig& config, AuditReport& integrity) {
  namespace fs = std::filesystem;
  fs::path mpath = dir / "manifest.json";
  if (!fs::exists(mpath)) throw ConfigError("incomplete bundle: " + dir.string() + " has no manifest.json");
  json manifest;
  try {
    manifest = json::parse(slurp(mpath));
  } catch (const json::parse_error&) {
    throw ConfigError("incomplete bundle: manifest.json is not valid JSON");
  }
  if (!manifest.contains("files") || !manifest["files"].is_object()) {
    throw ConfigError("incomplete bundle: manifest.json lists no files");
  }
  for (const char* need : {"config.json", "path.csv", "trajectory.csv", "diagnostics.csv", "defect.csv"}) {
    if (!manifest["files"].contains(need)) throw ConfigError(std::string("incomplete bundle: manifest lacks ") + need);
  }
  std::map<std::string, std::string> content;
  CheckResult hashes{"bundle_integrity", true, false, 0.0, 0.0, 0.0, ""};
  for (auto it = manifest["files"].begin(); it != manifest["files"].end(); ++it) {
    fs::path f = dir / it.key();
    if (!fs::exists(f)) throw ConfigError("incomplete bundle: missing " + it.key());
    content[it.key()] = slurp(f);
    if (hex(fnv1a(content[it.key()])) != it.value().get<std::string>()) {
      hashes.pass = false;
      hashes.measured += 1.0;
      hashes.note += (hashes.note.empty() ? "modified: " : ",") + it.key();
    }
  }
  integrity.add(hashes);

  config = parse_config(content["config.json"]);
  if (!config.has_problem) throw ConfigError("bundle config has no /problem section");
  const std::uint64_t seed = manifest.value("seed", config.seed);

  Trajectory tr;
  tr.spec = std::make_shared<const ProblemSpec>(build_problem(config.problem));
  tr.config = config.bgk;
  {
    std::istringstream is(content["path.csv"]);
    tr.path = std::make_shared<const BrownianPath>(read_path_csv(is, config.bgk.dt, seed));
  }
  SpatialGrid grid = simulation_grid(*tr.spec, config.bgk);
  DensityField rho0 = sample_density(tr.spec->initial.rho, grid);

  csv::Table t = read_table(content["trajectory.csv"]);
  const std::size_t c_step = t.column("step"), c_time = t.column("time"), c_i = t.column("i"), c_rho = t.column("rho");
  for (const auto& row : t.rows) {
    int step = static_cast<int>(csv::parse_int(row[c_step]));
    if (tr.steps.empty() || tr.steps.back() != step) {
      tr.steps.push_back(step);
      tr.times.push_back(csv::parse_double(row[c_time]));
      tr.density.emplace_back(grid);
    }
    std::int64_t i = csv::parse_int(row[c_i]);
    if (i < 0 || static_cast<std::size_t>(i) >= grid.size()) throw DimensionError("trajectory.csv: cell index out of range");
    tr.density.back().values[static_cast<std::size_t>(i)] = csv::parse_double(row[c_rho]);
  }
  if (tr.density.empty()) throw ConfigError("trajectory.csv holds no snapshots");
  tr.vgrid = simulation_vgrid(rho0, config.bgk);

  CheckResult init{"initial_data", true, false, 0.0, 0.0, 0.0, ""};
  init.measured = l1_distance(tr.density.front(), rho0);
  init.pass = init.measured == 0.0;
  integrity.add(init);

  csv::Table d = read_table(content["diagnostics.csv"]);
  const std::size_t c_u = d.column("u_l1"), c_gap = d.column("gap");
  if (d.rows.size() != tr.density.size()) throw DimensionError("diagnostics.csv and trajectory.csv disagree");
  for (const auto& row : d.rows) {
    tr.kinetic_l1.push_back(csv::parse_double(row[c_u]));
    tr.gap.push_back(csv::parse_double(row[c_gap]));
  }

  csv::Table m = read_table(content["defect.csv"]);
  const std::size_t c_mass = m.column("slab_mass");
  tr.defect.max_support = tr.vgrid.bound();
  for (const auto& row : m.rows) {
    double v = csv::parse_double(row[c_mass]);
    tr.defect.slab_mass.push_back(v);
    tr.defect.total += v;
    tr.defect.min_entry = std::min(tr.defect.min_entry, v);
  }
  return tr;
}

CommandResult cmd_simulate(const RunConfig& config, const std::filesystem::path& out) {
  if (!config.has_problem) throw ConfigError("missing field /problem");
  ProblemSpec spec = build_problem(config.problem);
  BrownianPath path = build_path(config);
  BGKConfig bgk = config.bgk;
  bgk.keep_kinetic = config.audit.kinetic;
  bgk.keep_defect_field = config.audit.kinetic;
  Trajectory traj = run_simulation(spec, bgk, path);

  CommandResult res;
  res.report = audit_trajectory(traj, config);

  Bundle b;
  if (config.epsilon_ladder.size() >= 2) {
    ContinuationReport cont = epsilon_continuation(spec, config.bgk, path, config.epsilon_ladder);
    std::ostringstream os;
    csv::write_row(os, {"epsilon", "gap_integral", "final_gap", "cauchy"});
    for (const auto& l : cont.levels) {
      csv::write_row(os, {csv::format(l.epsilon), csv::format(l.gap_integral), csv::format(l.final_gap),
                          csv::format(l.cauchy)});
    }
    b.add("continuation.csv", os.str());
    res.report.add({"gap_decreasing", cont.gap_decreasing, false, 0.0, 0.0, 0.0, ""});
    if (cont.levels.size() >= 3) res.report.add({"cauchy_decreasing", cont.cauchy_decreasing, false, 0.0, 0.0, 0.0, ""});
  }
  if (config.audit.picard) {
    PicardResult pr = picard_solve(spec, config.bgk, path);
    std::ostringstream os;
    csv::write_row(os, {"sweep", "change"});
    for (std::size_t i = 0; i < pr.sweep_changes.size(); ++i) {
      csv::write_row(os, {csv::format(static_cast<std::int64_t>(i)), csv::format(pr.sweep_changes[i])});
    }
    b.add("picard.csv", os.str());
    CheckResult c{"picard_contraction", false, false, pr.contraction, pr.bound + 0.05, 0.05, ""};
    c.pass = pr.converged && c.measured <= c.bound;
    if (!pr.converged) c.note = "did not converge";
    res.report.add(c);
  }

  std::ostringstream ps;
  write_path_csv(ps, path);
  b.add("path.csv", ps.str());
  b.add("trajectory.csv", trajectory_csv(traj));
  b.add("diagnostics.csv", diagnostics_csv(traj));
  b.add("defect.csv", defect_csv(traj));
  std::ostringstream rs;
  res.report.write_csv(rs);
  b.add("report.csv", rs.str());
  b.commit(out, config);
  res.exit_code = res.report.all_pass() ? 0 : 1;
  return res;
}

CommandResult cmd_convergence(const RunConfig& config, const std::filesystem::path& out) {
  if (!config.has_problem) throw ConfigError("missing field /problem");
  if (!config.has_convergence) throw ConfigError("missing field /convergence");
  const auto& ladder = config.convergence.cells;
  if (ladder.size() < 3) throw ConfigError("field /convergence/cells: a refinement study needs at least 3 levels");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1] || ladder[i] % ladder[i - 1] != 0) {
      throw ConfigError("field /convergence/cells: each level must refine the previous one by an integer factor");
    }
  }
  ProblemSpec spec = build_problem(config.problem);
  if (spec.dim != 1) throw ConfigError("field /problem/dim: refinement studies are one-dimensional");
  const int c0 = ladder.front(), cmax = ladder.back();
  const int oc = config.convergence.oracle_cells;
  if (oc % cmax != 0) throw ConfigError("field /convergence/oracle_cells: must be a multiple of the finest level");

  const double finest_dt = config.bgk.dt * c0 / cmax;
  BrownianPath fine = config.zero_noise ? BrownianPath::zero(1, finest_dt, config.bgk.T)
                                        : sample_path(split_seed(config.seed, 0), finest_dt, config.bgk.T, 1);
  double L = config.bgk.half_width;
  if (!(L > 0.0)) L = simulation_grid(spec, config.bgk).half_width();

  SpatialGrid og(1, L, oc);
  DensityField oracle;
  const bool characteristics = spec.flux.linear && spec.flux.slope == 1.0;
  if (characteristics) {
    oracle = linear_characteristics_oracle(spec, og, fine, config.bgk.T);
  } else {
    oracle = shift_reduction_oracle(spec, sample_density(spec.initial.rho, og), fine, config.bgk.T,
                                    config.convergence.cfl);
  }
  const double rho0_l1 = lp_norm(sample_density(spec.initial.rho, og), Norm::L1);

  std::vector<double> hs, errs;
  std::ostringstream os;
  csv::write_row(os, {"level", "cells", "h", "dt", "epsilon", "velocity_cells", "error", "relative_error"});
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    const int factor = ladder[l] / c0;
    BGKConfig bgk = config.bgk;
    bgk.cells = ladder[l];
    bgk.half_width = L;
    bgk.dt = config.bgk.dt / factor;
    bgk.epsilon = config.bgk.epsilon / factor;
    bgk.velocity_cells = config.bgk.velocity_cells * factor;
    bgk.snapshot_stride = std::max(1, bgk.steps());
    BrownianPath path = coarsen(fine, cmax / ladder[l]);
    Trajectory tr = run_simulation(spec, bgk, path);
    double err = l1_error_on_fine(tr.density.back(), oracle);
    hs.push_back(tr.grid().h());
    errs.push_back(err);
    csv::write_row(os, {csv::format(static_cast<int>(l)), csv::format(ladder[l]), csv::format(tr.grid().h()),
                        csv::format(bgk.dt), csv::format(bgk.epsilon), csv::format(bgk.velocity_cells),
                        csv::format(err), csv::format(err / rho0_l1)});
  }
  double rate = fit_rate(hs, errs);

  CommandResult res;
  CheckResult r{"convergence_rate", false, false, rate, 1.3, 0.3, "accepted range [0.7, 1.3]"};
  r.pass = rate >= 0.7 && rate <= 1.3;
  res.report.add(r);
  CheckResult f{"finest_error", false, false, errs.back() / rho0_l1, 0.02, 0.0, "relative to ||rho0||_L1"};
  f.pass = f.measured <= f.bound;
  res.report.add(f);

  Bundle b;
  b.add("convergence.csv", os.str());
  std::ostringstream rs;
  res.report.write_csv(rs);
  b.add("report.csv", rs.str());
  b.commit(out, config);
  res.exit_code = res.report.all_pass() ? 0 : 1;
  return res;
}

CommandResult cmd_counterexample(const RunConfig& config, const std::filesystem::path& out) {
  if (!config.has_counterexample) throw ConfigError("missing field /counterexample");
  const auto& x = config.counterexample;
  if (x.deterministic_cells.size() < 2) {
    throw ConfigError("field /counterexample/deterministic_cells: needs at least 2 resolutions");
  }
  if (x.stochastic_cells.size() < 2) throw ConfigError("field /counterexample/stochastic_cells: needs at least 2 resolutions");

  auto cusp = bv_growth_experiment(data::cusp_product(), x.t, x.deterministic_cells, x.R);
  auto smooth = bv_growth_experiment(data::smooth_product(), x.t, x.deterministic_cells, x.R);
  StochasticCounterpartOptions opt;
  opt.dt_over_h = x.dt_over_h;
  opt.velocity_cells = x.velocity_cells;
  opt.R = x.R;
  opt.zero_noise = config.zero_noise;
  auto stoch = stochastic_counterpart(data::cusp_product(), x.t, x.stochastic_cells, x.paths, config.seed, opt);

  std::ostringstream det;
  csv::write_row(det, {"data", "cells", "h", "t", "bv"});
  for (const auto* rows : {&cusp, &smooth}) {
    const char* name = rows == &cusp ? "cusp" : "smooth";
    for (const auto& r : *rows) {
      csv::write_row(det, {name, csv::format(r.cells), csv::format(r.h), csv::format(r.t), csv::format(r.bv)});
    }
  }
  std::ostringstream st, samples;
  csv::write_row(st, {"cells", "h", "t", "mean", "std", "paths"});
  csv::write_row(samples, {"cells", "path", "bv"});
  for (const auto& r : stoch) {
    csv::write_row(st, {csv::format(r.cells), csv::format(r.h), csv::format(r.t), csv::format(r.mean),
                        csv::format(r.std), csv::format(r.paths)});
    for (std::size_t p = 0; p < r.samples.size(); ++p) {
      csv::write_row(samples, {csv::format(r.cells), csv::format(static_cast<std::int64_t>(p)), csv::format(r.samples[p])});
    }
  }
  std::ostringstream fig;
  {
    SpatialGrid fg(2, x.R, x.figure_cells);
    DensityField d = deterministic_solution(x.t, data::cusp_product(), fg);
    csv::write_row(fig, {"x", "y", "rho"});
    for (std::size_t i = 0; i < fg.size(); ++i) {
      Point p = fg.center_point(i);
      csv::write_row(fig, {csv::format(p[0]), csv::format(p[1]), csv::format(d.values[i])});
    }
  }

  CommandResult res;
  double growth = cusp.back().bv / cusp.front().bv;
  res.report.add({"deterministic_bv_growth", growth >= 3.0, false, growth, 3.0, 0.0, "BV ratio finest/coarsest"});
  double drift = std::abs(smooth.back().bv / smooth.front().bv - 1.0);
  res.report.add({"smooth_control", drift <= 0.1, false, drift, 0.1, 0.0, "relative BV change"});
  const auto& a = stoch[stoch.size() - 2];
  const auto& z = stoch.back();
  double var = std::abs(z.mean - a.mean) / a.mean;
  res.report.add({"stochastic_bv_variation", var <= 0.15, false, var, 0.15, 0.0, "last two refinements"});

  Bundle b;
  b.add("bv_deterministic.csv", det.str());
  b.add("bv_stochastic.csv", st.str());
  b.add("bv_samples.csv", samples.str());
  b.add("field_deterministic.csv", fig.str());
  std::ostringstream rs;
  res.report.write_csv(rs);
  b.add("report.csv", rs.str());
  b.commit(out, config);
  res.exit_code = res.report.all_pass() ? 0 : 1;
  return res;
}

CommandResult cmd_audit(const std::filesystem::path& bundle, const std::filesystem::path& out) {
  RunConfig config;
  AuditReport rep;
  Trajectory tr = load_bundle(bundle, config, rep);
  AuditReport checks = audit_trajectory(tr, config);
  for (auto& c : checks.checks) {
    if (c.name == "defect_structure") c.note += " (from slab totals)";
    rep.add(c);
  }
  CommandResult res;
  res.report = rep;
  if (!out.empty()) {
    Bundle b;
    std::ostringstream rs;
    rep.write_csv(rs);
    b.add("report.csv", rs.str());
    b.commit(out, config);
  }
  res.exit_code = rep.all_pass() ? 0 : 1;
  return res;
}

CommandResult cmd_paths(const RunConfig& config, const std::filesystem::path& out) {
  if (!config.has_paths) throw ConfigError("missing field /paths");
  const auto& p = config.path_stats;
  if (p.count < 1) throw ConfigError("field /paths/count: must be at least 1");
  CommandResult res;
  std::ostringstream os;
  csv::write_row(os, {"dim", "paths", "dt", "delta", "statistic", "lower", "upper", "increment_mean",
                      "increment_var_over_dt"});
  for (int d : p.dims) {
    auto paths = sample_paths(split_seed(config.seed, static_cast<std::uint64_t>(d)), p.count, p.dt, p.horizon, d);
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& path : paths) {
      for (double x : path.increments()) {
        sum += x;
        sq += x * x;
        ++n;
      }
    }
    double mean = sum / n;
    double var = (sq / n - mean * mean) / p.dt;
    for (double delta : p.deltas) {
      double s = levy_modulus_statistic(paths, delta);
      double lo = 0.5 * std::sqrt(d), hi = 1.5 * std::sqrt(d);
      csv::write_row(os, {csv::format(d), csv::format(p.count), csv::format(p.dt), csv::format(delta), csv::format(s),
                          csv::format(lo), csv::format(hi), csv::format(mean), csv::format(var)});
      CheckResult c{"levy_d" + std::to_string(d) + "_delta" + csv::format(delta), false, false, s, hi, 0.0,
                    "accepted range [0.5, 1.5] sqrt(d)"};
      c.pass = s >= lo && s <= hi;
      res.report.add(c);
    }
  }
  Bundle b;
  b.add("paths.csv", os.str());
  std::ostringstream rs;
  res.report.write_csv(rs);
  b.add("report.csv", rs.str());
  b.commit(out, config);
  res.exit_code = res.report.all_pass() ? 0 : 1;
  return res;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const StructuralViolation*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 2;
  return 3;
}

}  // namespace sbgk
