#include "sbgk/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbgk/errors.hpp"

namespace sbgk {

Flux Flux::linear_flux(double c) {
  Flux fl;
  fl.name = "linear";
  fl.f = [c](double r) { return c * r; };
  fl.df = [c](double) { return c; };
  fl.linear = true;
  fl.slope = c;
  return fl;
}

Flux Flux::burgers() {
  Flux fl;
  fl.name = "burgers";
  fl.f = [](double r) { return 0.5 * r * r; };
  fl.df = [](double r) { return r; };
  fl.argmin = 0.0;
  return fl;
}

void maxwellian_into(double rho, const VelocityGrid& vg, std::span<double> out) {
  const int n = vg.cells();
  if (out.size() != static_cast<std::size_t>(n)) throw DimensionError("maxwellian output has wrong length");
  if (!std::isfinite(rho)) throw NumericalError("non-finite density in maxwellian lift");
  if (std::abs(rho) > vg.bound()) {
    throw RangeError("density " + std::to_string(rho) + " exceeds velocity bound " + std::to_string(vg.bound()));
  }
  std::fill(out.begin(), out.end(), 0.0);
  const int half = n / 2;
  double w = std::abs(rho) / vg.dv();
  int k = static_cast<int>(std::floor(w));
  double r = w - k;
  if (k >= half) {
    k = half;
    r = 0.0;
  }
  if (rho > 0.0) {
    for (int j = 0; j < k; ++j) out[half + j] = 1.0;
    if (k < half) out[half + k] = r;
  } else if (rho < 0.0) {
    for (int j = 0; j < k; ++j) out[half - 1 - j] = -1.0;
    if (k < half) out[half - 1 - k] = -r;
  }
}

std::vector<double> maxwellian_cell_average(double rho, const VelocityGrid& vg) {
  std::vector<double> out(static_cast<std::size_t>(vg.cells()));
  maxwellian_into(rho, vg, out);
  return out;
}

double cell_density(std::span<const double> u, const VelocityGrid& vg) {
  const int half = vg.cells() / 2;
  double pos = 0.0;
  for (int j = half; j < vg.cells(); ++j) pos += u[j];
  double neg = 0.0;
  for (int j = half - 1; j >= 0; --j) neg += u[j];
  return vg.dv() * (pos + neg);
}

KineticField lift(const DensityField& rho, const VelocityGrid& vg) {
  KineticField u(rho.grid, vg);
  for (std::size_t i = 0; i < rho.values.size(); ++i) maxwellian_into(rho.values[i], vg, u.cell(i));
  return u;
}

DensityField density_from_kinetic(const KineticField& u) {
  if (u.values.size() != u.sgrid.size() * static_cast<std::size_t>(u.vgrid.cells())) {
    throw DimensionError("kinetic field storage does not match its grids");
  }
  DensityField rho(u.sgrid);
  for (std::size_t i = 0; i < rho.values.size(); ++i) rho.values[i] = cell_density(u.cell(i), u.vgrid);
  return rho;
}

EntropyPair entropy_pair(double rho, double v, const Flux& flux) {
  double fr = flux.f(rho);
  double fv = flux.f(v);
  return {std::abs(rho - v) - std::abs(v), sgn(rho - v) * (fr - fv) - sgn(v) * fv};
}

namespace {

bool in_region(const SpatialGrid& g, const Region& region, int ix, int iy) {
  return region.contains({g.center(ix), g.center(iy)}, g.dim());
}

}  // namespace

double discrete_bv(const DensityField& rho, const Region& region) {
  const SpatialGrid& g = rho.grid;
  const int n = g.cells_per_axis();
  const auto& v = rho.values;
  double total = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i + 1 < n; ++i) {
      if (in_region(g, region, i, 0) && in_region(g, region, i + 1, 0)) total += std::abs(v[i + 1] - v[i]);
    }
    return total;
  }
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (!in_region(g, region, ix, iy)) continue;
      double here = v[g.flat(ix, iy)];
      if (ix + 1 < n && in_region(g, region, ix + 1, iy)) total += std::abs(v[g.flat(ix + 1, iy)] - here);
      if (iy + 1 < n && in_region(g, region, ix, iy + 1)) total += std::abs(v[g.flat(ix, iy + 1)] - here);
    }
  }
  return total * g.h();
}

double discrete_bv(const DensityField& rho) { return discrete_bv(rho, Region::whole(rho.grid)); }

double lp_norm(const DensityField& rho, Norm p, const Region& region) {
  const SpatialGrid& g = rho.grid;
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i) {
    if (!region.contains(g.center_point(i), g.dim())) continue;
    double a = std::abs(rho.values[i]);
    switch (p) {
      case Norm::L1: acc += a; break;
      case Norm::L2: acc += a * a; break;
      case Norm::Linf: acc = std::max(acc, a); break;
    }
  }
  switch (p) {
    case Norm::L1: return acc * g.cell_volume();
    case Norm::L2: return std::sqrt(acc * g.cell_volume());
    case Norm::Linf: return acc;
  }
  return acc;
}

double lp_norm(const DensityField& rho, Norm p) { return lp_norm(rho, p, Region::whole(rho.grid)); }

double l1_distance(const DensityField& a, const DensityField& b, const Region& region) {
  if (!(a.grid == b.grid)) throw DimensionError("l1_distance: grids differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (region.contains(a.grid.center_point(i), a.grid.dim())) acc += std::abs(a.values[i] - b.values[i]);
  }
  return acc * a.grid.cell_volume();
}

double l1_distance(const DensityField& a, const DensityField& b) {
  return l1_distance(a, b, Region::whole(a.grid));
}

double kinetic_l1(const KineticField& u) {
  double acc = 0.0;
  for (double x : u.values) acc += std::abs(x);
  return acc * u.sgrid.cell_volume() * u.vgrid.dv();
}

double equilibrium_gap(const KineticField& u) {
  std::vector<double> chi(static_cast<std::size_t>(u.vgrid.cells()));
  double acc = 0.0;
  for (std::size_t i = 0; i < u.sgrid.size(); ++i) {
    auto c = u.cell(i);
    maxwellian_into(cell_density(c, u.vgrid), u.vgrid, chi);
    for (std::size_t j = 0; j < chi.size(); ++j) acc += std::abs(c[j] - chi[j]);
  }
  return acc * u.sgrid.cell_volume() * u.vgrid.dv();
}

}  // namespace sbgk
