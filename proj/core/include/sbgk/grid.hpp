#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace sbgk {

using Point = std::array<double, 2>;

/// Uniform cell-centred grid on the box [-L, L]^dim, dim in {1, 2}.
///
/// Cell centres are x_i = -L + (i + 1/2) h with h = 2L / n. In two
/// dimensions the flat index is ix + n * iy (x fastest).
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(int dim, double half_width, int cells_per_axis);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int cells_per_axis() const { return n_; }
  double h() const { return h_; }
  double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }
  std::size_t size() const;

  double center(int i) const { return -half_width_ + (i + 0.5) * h_; }
  Point center_point(std::size_t flat) const;
  std::size_t flat(int ix, int iy = 0) const {
    return static_cast<std::size_t>(ix) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(iy);
  }

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  int dim_ = 1;
  double half_width_ = 1.0;
  int n_ = 4;
  double h_ = 0.5;
};

/// Velocity cells covering [-N, N] with spacing dv = 2N / n_v.
///
/// n_v is even so that v = 0 is a cell edge and every cell lies entirely on
/// one side of it. When n_v is a power of two, dv * n_v / 2 == N exactly in
/// floating point, which makes the discrete L-infinity bound hold without
/// rounding slack.
class VelocityGrid {
 public:
  VelocityGrid() = default;
  VelocityGrid(double bound, int cells);

  /// N = max|rho0| (1 when the data vanish identically).
  static VelocityGrid for_data(double max_abs_density, int cells);

  double bound() const { return bound_; }
  int cells() const { return n_; }
  double dv() const { return dv_; }
  double lower_edge(int j) const { return -bound_ + j * dv_; }
  double upper_edge(int j) const { return -bound_ + (j + 1) * dv_; }
  double center(int j) const { return -bound_ + (j + 0.5) * dv_; }
  /// First cell with v > 0.
  int positive_begin() const { return n_ / 2; }

  friend bool operator==(const VelocityGrid&, const VelocityGrid&) = default;

 private:
  double bound_ = 1.0;
  int n_ = 4;
  double dv_ = 0.5;
};

/// Axis-aligned box in physical coordinates; unused axes are ignored.
struct Region {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};

  static Region whole(const SpatialGrid& grid);
  bool contains(const Point& p, int dim) const;
};

/// Gridded density rho(t, .).
struct DensityField {
  SpatialGrid grid;
  std::vector<double> values;

  DensityField() = default;
  explicit DensityField(const SpatialGrid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  double max_abs() const;
};

/// Cell-averaged kinetic unknown u(t, x, v), stored with velocity fastest:
/// values[cell * n_v + j].
struct KineticField {
  SpatialGrid sgrid;
  VelocityGrid vgrid;
  std::vector<double> values;

  KineticField() = default;
  KineticField(const SpatialGrid& s, const VelocityGrid& v)
      : sgrid(s), vgrid(v), values(s.size() * static_cast<std::size_t>(v.cells()), 0.0) {}

  std::span<double> cell(std::size_t flat) {
    return {values.data() + flat * static_cast<std::size_t>(vgrid.cells()),
            static_cast<std::size_t>(vgrid.cells())};
  }
  std::span<const double> cell(std::size_t flat) const {
    return {values.data() + flat * static_cast<std::size_t>(vgrid.cells()),
            static_cast<std::size_t>(vgrid.cells())};
  }
};

}  // namespace sbgk
