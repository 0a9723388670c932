#include "sbgk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"

namespace sbgk {

SpatialGrid::SpatialGrid(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), n_(cells_per_axis) {
  if (dim != 1 && dim != 2) throw DimensionError("spatial dimension must be 1 or 2, got " + std::to_string(dim));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("grid half width must be positive");
  if (cells_per_axis < 4) throw ConfigError("grid needs at least 4 cells per axis");
  h_ = 2.0 * half_width / cells_per_axis;
}

std::size_t SpatialGrid::size() const {
  auto n = static_cast<std::size_t>(n_);
  return dim_ == 1 ? n : n * n;
}

Point SpatialGrid::center_point(std::size_t flat) const {
  auto n = static_cast<std::size_t>(n_);
  if (dim_ == 1) return {center(static_cast<int>(flat)), 0.0};
  return {center(static_cast<int>(flat % n)), center(static_cast<int>(flat / n))};
}

VelocityGrid::VelocityGrid(double bound, int cells) : bound_(bound), n_(cells) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ConfigError("velocity bound must be positive");
  if (cells < 4 || cells % 2 != 0) throw ConfigError("velocity cells must be even and at least 4");
  dv_ = 2.0 * bound / cells;
}

VelocityGrid VelocityGrid::for_data(double max_abs_density, int cells) {
  double bound = max_abs_density > 0.0 ? max_abs_density : 1.0;
  return VelocityGrid(bound, cells);
}

Region Region::whole(const SpatialGrid& grid) {
  double l = grid.half_width();
  return Region{{-l, -l}, {l, l}};
}

bool Region::contains(const Point& p, int dim) const {
  for (int a = 0; a < dim; ++a) {
    if (p[a] < lo[a] || p[a] > hi[a]) return false;
  }
  return true;
}

double DensityField::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace sbgk
