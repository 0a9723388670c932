#include "sbgk/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sbgk/counterexample.hpp"
#include "sbgk/errors.hpp"

namespace sbgk {

double ProblemSpec::sup_f_prime(double bound) const {
  if (flux.linear) return std::abs(flux.slope);
  return std::max(std::abs(flux.df(-bound)), std::abs(flux.df(bound)));
}

double ProblemSpec::C0(double bound) const {
  if (field.div_free) return 0.0;
  return sup_f_prime(bound) * field.sup_abs_div;
}

void ProblemSpec::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("problem dimension must be 1 or 2");
  if (field.dim != dim) throw ConfigError("field '" + field.name + "' has the wrong dimension");
  if (!flux.f || !flux.df) throw ConfigError("flux '" + flux.name + "' is missing f or f'");
  if (!field.b || !field.div_b) throw ConfigError("field '" + field.name + "' is missing b or div b");
  if (!initial.rho) throw ConfigError("initial data '" + initial.name + "' has no generator");
  if (field.div_free && field.sup_abs_div != 0.0) {
    throw ConfigError("field '" + field.name + "' is flagged divergence free but has nonzero div b bound");
  }
  if (!field.div_free) {
    bool div_bounded = std::isfinite(field.sup_abs_div);
    if (!(div_bounded && f_prime_bounded)) {
      throw ConfigError("need div b = 0, or both div b and f' bounded");
    }
  }
}

ProblemSpec make_problem(const Flux& flux, const TransportField& field, const InitialData& data) {
  ProblemSpec s;
  s.name = flux.name + "/" + field.name + "/" + data.name;
  s.dim = field.dim;
  s.flux = flux;
  s.field = field;
  s.initial = data;
  s.validate();
  return s;
}

DensityField sample_density(const ScalarField& rho, const SpatialGrid& grid) {
  DensityField out(grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = rho(grid.center_point(i));
  return out;
}

double pad_width(const ProblemSpec& spec, double bound, double horizon) {
  return spec.sup_f_prime(bound) * spec.field.sup_abs * horizon + 6.0 * std::sqrt(horizon);
}

SpatialGrid padded_grid(const ProblemSpec& spec, double bound, double horizon, int cells_per_axis) {
  double extent = 0.0;
  for (int a = 0; a < spec.dim; ++a) {
    extent = std::max({extent, std::abs(spec.initial.support.lo[a]), std::abs(spec.initial.support.hi[a])});
  }
  double pad = pad_width(spec, bound, horizon);
  if (!std::isfinite(pad)) throw ConfigError("field '" + spec.field.name + "' is unbounded; no finite pad");
  return SpatialGrid(spec.dim, extent + pad, cells_per_axis);
}

namespace fields {

TransportField zero(int dim) { return constant(dim, {0.0, 0.0}); }

TransportField constant(int dim, Point value) {
  TransportField t;
  t.name = "constant";
  t.dim = dim;
  if (dim == 1) value[1] = 0.0;
  t.b = [value](const Point&) { return value; };
  t.div_b = [](const Point&) { return 0.0; };
  t.constant = true;
  t.value = value;
  t.sup_abs = std::hypot(value[0], value[1]);
  if (t.sup_abs == 0.0) t.name = "zero";
  return t;
}

TransportField sine_1d(double a) {
  TransportField t;
  t.name = "sine";
  t.dim = 1;
  t.b = [a](const Point& p) { return Point{1.0 + a * std::sin(p[0]), 0.0}; };
  t.div_b = [a](const Point& p) { return a * std::cos(p[0]); };
  t.div_free = a == 0.0;
  t.sup_abs = 1.0 + std::abs(a);
  t.sup_abs_div = std::abs(a);
  return t;
}

TransportField linear_1d() {
  TransportField t;
  t.name = "linear";
  t.dim = 1;
  t.b = [](const Point& p) { return Point{p[0], 0.0}; };
  t.div_b = [](const Point&) { return 1.0; };
  t.div_free = false;
  t.sup_abs = std::numeric_limits<double>::infinity();
  t.sup_abs_div = 1.0;
  return t;
}

TransportField shear_2d(double a) {
  TransportField t;
  t.name = "shear";
  t.dim = 2;
  t.b = [a](const Point& p) { return Point{a * std::sin(p[1]), 0.0}; };
  t.div_b = [](const Point&) { return 0.0; };
  t.sup_abs = std::abs(a);
  return t;
}

TransportField cusp_2d() {
  TransportField t;
  t.name = "cusp";
  t.dim = 2;
  t.b = [](const Point& p) { return Point{0.0, cusp::b1(p[0]) * cusp::b2(p[1])}; };
  t.div_b = [](const Point& p) { return cusp::b1(p[0]) * cusp::b2_prime(p[1]); };
  t.div_free = false;
  t.sup_abs = 0.5;
  t.sup_abs_div = 1.0;
  return t;
}

}  // namespace fields

namespace data {

InitialData zero(int dim) {
  InitialData d;
  d.name = "zero";
  d.rho = [](const Point&) { return 0.0; };
  d.support = Region{{0.0, 0.0}, {0.0, 0.0}};
  (void)dim;
  return d;
}

InitialData pulse(double a, double b, double height) {
  if (!(a < b)) throw ConfigError("pulse needs a < b");
  InitialData d;
  d.name = "pulse";
  d.rho = [a, b, height](const Point& p) { return (p[0] >= a && p[0] <= b) ? height : 0.0; };
  d.support = Region{{a, 0.0}, {b, 0.0}};
  d.sup = std::abs(height);
  return d;
}

namespace {

double bump1(double x, double c, double w) {
  double s = (x - c) / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * s));
}

}  // namespace

InitialData cosine_bump(int dim, Point center, double width, double height) {
  if (!(width > 0.0)) throw ConfigError("bump width must be positive");
  InitialData d;
  d.name = "bump";
  if (dim == 1) {
    d.rho = [=](const Point& p) { return height * bump1(p[0], center[0], width); };
  } else {
    d.rho = [=](const Point& p) { return height * bump1(p[0], center[0], width) * bump1(p[1], center[1], width); };
  }
  d.support = Region{{center[0] - width, center[1] - width}, {center[0] + width, center[1] + width}};
  d.sup = std::abs(height);
  return d;
}

InitialData cusp_product() {
  InitialData d;
  d.name = "cusp";
  d.rho = [](const Point& p) { return cusp::rho01(p[0]) * cusp::rho02(p[1]); };
  d.support = Region{{0.0, 0.0}, {3.0, 2.0}};
  d.sup = 1.0;
  return d;
}

InitialData smooth_product() {
  InitialData d;
  d.name = "smooth";
  d.rho = [](const Point& p) { return cusp::rho01_smooth(p[0]) * cusp::rho02(p[1]); };
  d.support = Region{{0.0, 0.0}, {3.0, 2.0}};
  d.sup = 1.0;
  return d;
}

}  // namespace data

}  // namespace sbgk
