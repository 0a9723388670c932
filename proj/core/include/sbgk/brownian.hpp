#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sbgk/grid.hpp"

namespace sbgk {

/// Sampled d-dimensional Brownian motion on the nodes t_k = k dt.
///
/// Increments are stored on the dyadic lattice 2^-40, so B(t_k) is the exact
/// sum of the increments and B(t) - B(s) does not depend on summation order.
class BrownianPath {
 public:
  static constexpr int kQuantumExponent = -40;

  BrownianPath() = default;
  /// Takes ownership of raw increments (steps * dim values, coordinate
  /// fastest) and quantises them.
  BrownianPath(int dim, double dt, std::uint64_t seed, std::vector<double> increments);

  static BrownianPath zero(int dim, double dt, double horizon);

  int dim() const { return dim_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }
  double horizon() const { return steps_ * dt_; }
  std::uint64_t seed() const { return seed_; }

  Point increment(int k) const;
  Point position(int k) const;
  const std::vector<double>& increments() const { return increments_; }

  /// Nearest node to t; RangeError outside [0, horizon].
  int node(double t) const;

 private:
  int dim_ = 1;
  double dt_ = 1.0;
  int steps_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> increments_;
  std::vector<double> positions_;
};

/// Number of steps for horizon T at step dt (T / dt rounded to nearest).
int step_count(double dt, double horizon);

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of path `index` drawn from a master seed.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

BrownianPath sample_path(std::uint64_t seed, double dt, double horizon, int dim);
std::vector<BrownianPath> sample_paths(std::uint64_t master, int count, double dt, double horizon, int dim);

/// CSV with columns step,dB1[,dB2].
void write_path_csv(std::ostream& os, const BrownianPath& path);
BrownianPath read_path_csv(std::istream& is, double dt, std::uint64_t seed);

/// max over paths and windows t2 - t1 <= delta of |B(t2) - B(t1)| divided by
/// sqrt(2 delta log(1/delta)).
double levy_modulus_statistic(const std::vector<BrownianPath>& paths, double delta);

}  // namespace sbgk
