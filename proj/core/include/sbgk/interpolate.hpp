#pragma once

#include <algorithm>
#include <cmath>

#include "sbgk/grid.hpp"

namespace sbgk {

/// Left neighbour index and weight of the right neighbour for position x on
/// one grid axis.
struct Stencil {
  long a = 0;
  double theta = 0.0;
};

inline Stencil locate(const SpatialGrid& g, double x) {
  double s = (x + g.half_width()) / g.h() - 0.5;
  double fl = std::floor(s);
  // Far outside the box every neighbour is zero anyway.
  fl = std::clamp(fl, -4.0, static_cast<double>(g.cells_per_axis()) + 4.0);
  return {static_cast<long>(fl), std::clamp(s - fl, 0.0, 1.0)};
}

/// (1 - theta) p + theta q, clamped to [min(p, q), max(p, q)].
inline double lerp_clamped(double p, double q, double theta) {
  double v = (1.0 - theta) * p + theta * q;
  return std::clamp(v, std::min(p, q), std::max(p, q));
}

inline double bilerp_clamped(double p00, double p10, double p01, double p11, double tx, double ty) {
  double w0 = 1.0 - tx;
  double v = (1.0 - ty) * (w0 * p00 + tx * p10) + ty * (w0 * p01 + tx * p11);
  double lo = std::min(std::min(p00, p10), std::min(p01, p11));
  double hi = std::max(std::max(p00, p10), std::max(p01, p11));
  return std::clamp(v, lo, hi);
}

/// Clamped linear (bilinear) interpolation of cell-centre data, zero outside
/// the box. `at(flat)` returns the value stored at a flat cell index.
template <class At>
double interpolate(const SpatialGrid& g, const Point& x, At&& at) {
  const long n = g.cells_per_axis();
  Stencil sx = locate(g, x[0]);
  auto val = [&](long ix, long iy) {
    if (ix < 0 || ix >= n || iy < 0 || iy >= n) return 0.0;
    return at(g.flat(static_cast<int>(ix), static_cast<int>(iy)));
  };
  if (g.dim() == 1) return lerp_clamped(val(sx.a, 0), val(sx.a + 1, 0), sx.theta);
  Stencil sy = locate(g, x[1]);
  return bilerp_clamped(val(sx.a, sy.a), val(sx.a + 1, sy.a), val(sx.a, sy.a + 1), val(sx.a + 1, sy.a + 1), sx.theta,
                        sy.theta);
}

inline double interpolate(const DensityField& rho, const Point& x) {
  return interpolate(rho.grid, x, [&](std::size_t i) { return rho.values[i]; });
}

}  // namespace sbgk
