#include "sbgk/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "sbgk/csv.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/parallel.hpp"

namespace sbgk {

namespace {

double quantise(double x) {
  return std::ldexp(std::nearbyint(std::ldexp(x, -BrownianPath::kQuantumExponent)), BrownianPath::kQuantumExponent);
}

}  // namespace

BrownianPath::BrownianPath(int dim, double dt, std::uint64_t seed, std::vector<double> increments)
    : dim_(dim), dt_(dt), seed_(seed), increments_(std::move(increments)) {
  if (dim != 1 && dim != 2) throw DimensionError("path dimension must be 1 or 2");
  if (!(dt > 0.0)) throw ConfigError("path dt must be positive");
  if (increments_.size() % static_cast<std::size_t>(dim) != 0) throw DimensionError("increment count not a multiple of dim");
  steps_ = static_cast<int>(increments_.size() / static_cast<std::size_t>(dim));
  positions_.assign(static_cast<std::size_t>(steps_ + 1) * dim, 0.0);
  for (int k = 0; k < steps_; ++k) {
    for (int a = 0; a < dim; ++a) {
      double& inc = increments_[static_cast<std::size_t>(k) * dim + a];
      if (!std::isfinite(inc)) throw NumericalError("non-finite Brownian increment");
      inc = quantise(inc);
      positions_[static_cast<std::size_t>(k + 1) * dim + a] = positions_[static_cast<std::size_t>(k) * dim + a] + inc;
    }
  }
}

BrownianPath BrownianPath::zero(int dim, double dt, double horizon) {
  int steps = step_count(dt, horizon);
  return BrownianPath(dim, dt, 0, std::vector<double>(static_cast<std::size_t>(steps) * dim, 0.0));
}

Point BrownianPath::increment(int k) const {
  if (k < 0 || k >= steps_) throw RangeError("increment index " + std::to_string(k) + " outside path");
  Point p{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = increments_[static_cast<std::size_t>(k) * dim_ + a];
  return p;
}

Point BrownianPath::position(int k) const {
  if (k < 0 || k > steps_) throw RangeError("node " + std::to_string(k) + " outside path");
  Point p{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = positions_[static_cast<std::size_t>(k) * dim_ + a];
  return p;
}

int BrownianPath::node(double t) const {
  double k = std::nearbyint(t / dt_);
  if (t < 0.0 || k > steps_ || !std::isfinite(t)) {
    throw RangeError("time " + std::to_string(t) + " outside path horizon " + std::to_string(horizon()));
  }
  return static_cast<int>(k);
}

int step_count(double dt, double horizon) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
  if (dt > horizon * (1.0 + 1e-12)) throw ConfigError("dt exceeds the horizon");
  return std::max(1, static_cast<int>(std::llround(horizon / dt)));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

BrownianPath sample_path(std::uint64_t seed, double dt, double horizon, int dim) {
  int steps = step_count(dt, horizon);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  std::vector<double> inc(static_cast<std::size_t>(steps) * dim);
  for (double& x : inc) x = normal(gen);
  return BrownianPath(dim, dt, seed, std::move(inc));
}

std::vector<BrownianPath> sample_paths(std::uint64_t master, int count, double dt, double horizon, int dim) {
  std::vector<BrownianPath> out(static_cast<std::size_t>(std::max(count, 0)));
  parallel_for(
      out.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = sample_path(split_seed(master, i), dt, horizon, dim);
      },
      1);
  return out;
}

void write_path_csv(std::ostream& os, const BrownianPath& path) {
  std::vector<std::string> head{"step", "dB1"};
  if (path.dim() == 2) head.emplace_back("dB2");
  csv::write_row(os, head);
  for (int k = 0; k < path.steps(); ++k) {
    Point inc = path.increment(k);
    std::vector<std::string> row{csv::format(static_cast<std::int64_t>(k)), csv::format(inc[0])};
    if (path.dim() == 2) row.push_back(csv::format(inc[1]));
    csv::write_row(os, row);
  }
}

BrownianPath read_path_csv(std::istream& is, double dt, std::uint64_t seed) {
  csv::Table t = csv::read(is);
  int dim = static_cast<int>(t.header.size()) - 1;
  if (dim != 1 && dim != 2) throw ConfigError("path CSV must have 2 or 3 columns");
  std::vector<double> inc;
  inc.reserve(t.rows.size() * dim);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (csv::parse_int(t.rows[r][0]) != static_cast<std::int64_t>(r)) throw ConfigError("path CSV steps out of order");
    for (int a = 0; a < dim; ++a) inc.push_back(csv::parse_double(t.rows[r][1 + a]));
  }
  return BrownianPath(dim, dt, seed, std::move(inc));
}

double levy_modulus_statistic(const std::vector<BrownianPath>& paths, double delta) {
  if (paths.empty()) throw ConfigError("levy statistic needs at least one path");
  if (!(delta > 0.0) || delta >= std::exp(-1.0)) throw ConfigError("levy statistic needs 0 < delta < 1/e");
  double norm = std::sqrt(2.0 * delta * std::log(1.0 / delta));
  double best = 0.0;
  for (const auto& p : paths) {
    if (delta < p.dt() * (1.0 - 1e-12)) throw ConfigError("levy statistic needs delta >= dt");
    int lags = static_cast<int>(std::floor(delta / p.dt() + 1e-9));
    for (int k = 0; k < p.steps(); ++k) {
      Point a = p.position(k);
      for (int l = 1; l <= lags && k + l <= p.steps(); ++l) {
        Point b = p.position(k + l);
        double d = std::hypot(b[0] - a[0], b[1] - a[1]);
        best = std::max(best, d);
      }
    }
  }
  return best / norm;
}

}  // namespace sbgk
