#pragma once

#include <functional>
#include <string>

#include "sbgk/flux.hpp"
#include "sbgk/grid.hpp"
#include "sbgk/kinetic.hpp"

namespace sbgk {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

struct InitialData {
  std::string name;
  ScalarField rho;
  Region support;    // supp rho is inside this box
  double sup = 0.0;  // max |rho|
};

struct TransportField {
  std::string name;
  int dim = 1;
  VectorField b;
  ScalarField div_b;
  bool div_free = true;
  bool constant = false;
  Point value{0.0, 0.0};  // b when constant
  double sup_abs = 0.0;   // sup |b| (Euclidean)
  double sup_abs_div = 0.0;
};

/// Data of the stochastic transport equation
///   d_t rho + b . grad f(rho) + d_{x_i} rho o dB_i = 0.
struct ProblemSpec {
  std::string name;
  int dim = 1;
  Flux flux;
  TransportField field;
  InitialData initial;
  bool f_prime_bounded = true;

  /// sup |f'| over [-N, N]. f' is monotone for every supported flux.
  double sup_f_prime(double bound) const;
  /// ||f'||_inf ||div b||_inf, 0 when b is divergence free.
  double C0(double bound) const;
  /// Throws ConfigError unless div b = 0, or div b and f' are both bounded.
  void validate() const;
};

ProblemSpec make_problem(const Flux& flux, const TransportField& field, const InitialData& data);

DensityField sample_density(const ScalarField& rho, const SpatialGrid& grid);

/// Dead zone beyond the data support: sup|f'| sup|b| T + 6 sqrt(T).
double pad_width(const ProblemSpec& spec, double bound, double horizon);
/// Symmetric box [-L, L]^d covering the support plus the pad.
SpatialGrid padded_grid(const ProblemSpec& spec, double bound, double horizon, int cells_per_axis);

namespace fields {
TransportField zero(int dim);
TransportField constant(int dim, Point value);
/// b(x) = 1 + a sin(x) in 1D.
TransportField sine_1d(double a);
/// b(x) = x in 1D; unbounded, for flow checks only.
TransportField linear_1d();
/// Divergence-free shear b(x, y) = (a sin(y), 0).
TransportField shear_2d(double a);
/// b(x, y) = (0, b1(x) b2(y)) of the explicit blow-up construction.
TransportField cusp_2d();
}  // namespace fields

namespace data {
InitialData zero(int dim);
/// height on [a, b] (1D).
InitialData pulse(double a, double b, double height);
/// height * (1 + cos(pi (x - c) / w)) / 2 on |x - c| < w (1D) or the tensor
/// product of such profiles (2D).
InitialData cosine_bump(int dim, Point center, double width, double height);
/// rho01(x) rho02(y) with a square-root cusp at x = 0+.
InitialData cusp_product();
/// Same layout as cusp_product with a Lipschitz profile in x.
InitialData smooth_product();
}  // namespace data

}  // namespace sbgk
