#include "sbgk/flow.hpp"

#include <cmath>

#include "sbgk/errors.hpp"

namespace sbgk {

namespace {

void check(const FlowQuery& q, FlowDirection want, const BrownianPath& path, const ProblemSpec& spec) {
  if (q.direction != want) throw ConfigError("flow query has the wrong direction");
  if (!(q.s <= q.t)) throw RangeError("flow query needs s <= t");
  if (path.dim() != spec.dim) throw DimensionError("path and problem dimensions differ");
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }

}  // namespace

Point flow_forward(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec) {
  check(q, FlowDirection::forward, path, spec);
  const int ks = path.node(q.s);
  const int kt = path.node(q.t);
  const double fp = spec.flux.df(q.v);
  if (spec.field.constant) {
    Point shift = sub(path.position(kt), path.position(ks));
    double span = (kt - ks) * path.dt();
    return {q.x[0] + fp * spec.field.value[0] * span + shift[0], q.x[1] + fp * spec.field.value[1] * span + shift[1]};
  }
  Point x = q.x;
  for (int k = ks; k < kt; ++k) {
    Point bx = spec.field.b(x);
    Point db = path.increment(k);
    x = {x[0] + fp * bx[0] * path.dt() + db[0], x[1] + fp * bx[1] * path.dt() + db[1]};
  }
  return x;
}

Point flow_inverse(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec) {
  check(q, FlowDirection::inverse, path, spec);
  const int ks = path.node(q.s);
  const int kt = path.node(q.t);
  const double fp = spec.flux.df(q.v);
  if (spec.field.constant) {
    Point shift = sub(path.position(kt), path.position(ks));
    double span = (kt - ks) * path.dt();
    return {q.x[0] - fp * spec.field.value[0] * span - shift[0], q.x[1] - fp * spec.field.value[1] * span - shift[1]};
  }
  Point y = sub(q.x, path.position(kt));
  for (int k = kt - 1; k >= ks; --k) {
    Point bk = path.position(k + 1);
    Point bx = spec.field.b({y[0] + bk[0], y[1] + bk[1]});
    y = {y[0] - path.dt() * fp * bx[0], y[1] - path.dt() * fp * bx[1]};
  }
  Point bs = path.position(ks);
  return {y[0] + bs[0], y[1] + bs[1]};
}

double jacobian_determinant(const FlowQuery& q, const BrownianPath& path, const ProblemSpec& spec) {
  if (!(q.s <= q.t)) throw RangeError("flow query needs s <= t");
  const int ks = path.node(q.s);
  const int kt = path.node(q.t);
  const double fp = spec.flux.df(q.v);
  if (spec.field.div_free || fp == 0.0) return 1.0;
  double acc = 0.0;
  Point x = q.x;
  for (int k = ks; k < kt; ++k) {
    acc += spec.field.div_b(x) * path.dt();
    Point bx = spec.field.b(x);
    Point db = path.increment(k);
    x = {x[0] + fp * bx[0] * path.dt() + db[0], x[1] + fp * bx[1] * path.dt() + db[1]};
  }
  double j = std::exp(fp * acc);
  if (!std::isfinite(j)) throw NumericalError("jacobian overflow");
  return j;
}

}  // namespace sbgk
