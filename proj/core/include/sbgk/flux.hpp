#pragma once

#include <functional>
#include <string>

namespace sbgk {

/// Scalar flux f with derivative. Godunov fluxes need convexity; `argmin` is
/// the minimiser of f over the reals when the flux is convex and nonlinear.
struct Flux {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  bool convex = true;
  bool linear = false;
  double slope = 0.0;   // f' when linear
  double argmin = 0.0;  // used when convex && !linear

  static Flux linear_flux(double c);
  static Flux burgers();
};

}  // namespace sbgk
