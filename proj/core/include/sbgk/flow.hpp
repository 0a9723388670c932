#pragma once

#include "sbgk/brownian.hpp"
#include "sbgk/problem.hpp"

namespace sbgk {

enum class FlowDirection { forward, inverse };

/// X(s, t, x) for the characteristics dX = f'(v) b(X) dt + dB.
struct FlowQuery {
  double s = 0.0;
  double t = 0.0;
  Point x{0.0, 0.0};
  double v = 0.0;
  FlowDirection direction = FlowDirection::forward;
};

/// Euler-Maruyama from s to t with the drift at the left endpoint.
Point flow_forward(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec);

/// X_{t,s}(x), the inverse of x -> X(s, t, x), by integrating the shifted
/// variable Y = X - B backwards from t to s on the same path.
Point flow_inverse(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec);

/// exp(f'(v) sum_k div b(X_k) dt) along the forward trajectory.
double jacobian_determinant(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec);

/// Foot of the characteristic through x over the slab [t_k, t_{k+1}]:
/// x - dB_k - dt f' b(x).
inline Point inverse_step(const Point& x, const Point& db, double dt, double fp, const Point& bx) {
  return {x[0] - db[0] - dt * fp * bx[0], x[1] - db[1] - dt * fp * bx[1]};
}

}  // namespace sbgk
