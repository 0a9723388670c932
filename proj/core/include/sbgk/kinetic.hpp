#pragma once

#include <span>
#include <vector>

#include "sbgk/flux.hpp"
#include "sbgk/grid.hpp"

namespace sbgk {

inline double sgn(double r) { return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0); }

/// Cell averages of chi_rho(v) = 1_(0,rho)(v) - 1_(rho,0)(v).
///
/// The fill is computed in cell units (w = rho / dv), so dv * sum(out) == rho
/// exactly whenever dv is a power of two. Throws RangeError if |rho| > N.
void maxwellian_into(double rho, const VelocityGrid& vg, std::span<double> out);
std::vector<double> maxwellian_cell_average(double rho, const VelocityGrid& vg);

/// dv * sum_j u_j, summed outward from v = 0 on each side. This order makes
/// the sum exact on Maxwellian cell averages.
double cell_density(std::span<const double> u, const VelocityGrid& vg);

KineticField lift(const DensityField& rho, const VelocityGrid& vg);
DensityField density_from_kinetic(const KineticField& u);

struct EntropyPair {
  double eta = 0.0;
  double q = 0.0;
};

/// Kinetic entropy pair eta = |rho - v| - |v|,
/// Q = sgn(rho - v)(f(rho) - f(v)) - sgn(v) f(v).
EntropyPair entropy_pair(double rho, double v, const Flux& flux);

/// Sum over axes of |rho_{i+1} - rho_i| h^{dim-1} over neighbour pairs whose
/// centres both lie in the region.
double discrete_bv(const DensityField& rho, const Region& region);
double discrete_bv(const DensityField& rho);

enum class Norm { L1, L2, Linf };

double lp_norm(const DensityField& rho, Norm p);
double lp_norm(const DensityField& rho, Norm p, const Region& region);
double l1_distance(const DensityField& a, const DensityField& b);
double l1_distance(const DensityField& a, const DensityField& b, const Region& region);

/// sum h^d dv |u|.
double kinetic_l1(const KineticField& u);
/// sum h^d dv |u - chi_{rho(u)}|.
double equilibrium_gap(const KineticField& u);

}  // namespace sbgk
