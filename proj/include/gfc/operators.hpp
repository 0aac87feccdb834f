#pragma once

// k-integrals, k'-derivatives and the numerical checks of their composition,
// inversion and integration-by-parts identities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/grid_function.hpp"
#include "gfc/kernels.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

/// A real function on [a, b] together with what the quadrature engine needs
/// to know about it.
///
/// `at_left(d)` / `at_right(d)` optionally evaluate the function at distance d
/// from the left / right end of its domain; they are used near singular ends
/// where a + d would round.
struct RealFunction {
  std::function<double(double)> fn;
  quad::EndpointBehavior left;
  quad::EndpointBehavior right;
  std::function<double(double)> derivative;
  std::vector<double> breakpoints;
  std::string name = "f";
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();
  std::function<double(double)> at_left;
  std::function<double(double)> at_right;
  /// Identically zero; lets operators short-circuit.
  bool is_zero = false;

  double operator()(double x) const { return fn(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }

  // Evaluation at distance d from the integration end `end`. Without a
  // distance callback only the rounded abscissa x is seen: it is kept off
  // the end, and at an algebraic end the value is rescaled from the true
  // distance of x to the declared behavior at distance d.
  double eval_from_left(double x, double d, double end = NAN) const {
    if (at_left && std::isfinite(a)) return at_left(d);
    return eval_plain(x, d, end, left, INFINITY);
  }
  double eval_from_right(double x, double d, double end = NAN) const {
    if (at_right && std::isfinite(b)) return at_right(d);
    return eval_plain(x, d, end, right, -INFINITY);
  }

 private:
  double eval_plain(double x, double d, double end, const quad::EndpointBehavior& e, double inward) const {
    if (!(d > 0.0)) return fn(x);
    if (x == end) x = std::nextafter(x, inward);
    double v = fn(x);
    if (!std::isfinite(v)) {
      x = std::nextafter(x, inward);
      v = fn(x);
    }
    if (e.kind == quad::EndpointKind::algebraic && std::isfinite(end)) {
      const double dr = std::abs(x - end);
      if (dr != d && dr > 0.0) v *= std::pow(dr / d, e.exponent);
    }
    return v;
  }
};

inline RealFunction make_function(std::function<double(double)> fn, std::string name = "f",
                                  std::function<double(double)> derivative = {}) {
  RealFunction f;
  f.fn = std::move(fn);
  f.name = std::move(name);
  f.derivative = std::move(derivative);
  return f;
}

inline RealFunction constant_function(double c) {
  RealFunction f = make_function([c](double) { return c; }, "const", [](double) { return 0.0; });
  f.is_zero = c == 0.0;
  return f;
}

/// Interpolating view of a GridFunction; mesh nodes become quadrature breakpoints.
inline RealFunction from_grid(const GridFunction& g, std::string name = "grid") {
  RealFunction f;
  auto shared = std::make_shared<GridFunction>(g);
  f.fn = [shared](double x) { return (*shared)(x); };
  f.name = std::move(name);
  f.breakpoints = g.mesh();
  return f;
}

inline const std::vector<std::string>& registered_function_names() {
  static const std::vector<std::string> names = {"zero", "one", "ident", "tsq", "cos", "sin", "exp"};
  return names;
}

/// The fixed expression set {zero, one, ident, tsq, cos, sin, exp}.
inline RealFunction registered_function(const std::string& name) {
  RealFunction f;
  if (name == "zero") {
    f = constant_function(0.0);
  } else if (name == "one") {
    f = constant_function(1.0);
  } else if (name == "ident") {
    f = make_function([](double t) { return t; }, name, [](double) { return 1.0; });
  } else if (name == "tsq") {
    f = make_function([](double t) { return t * t; }, name, [](double t) { return 2.0 * t; });
  } else if (name == "cos") {
    f = make_function([](double t) { return std::cos(t); }, name, [](double t) { return -std::sin(t); });
  } else if (name == "sin") {
    f = make_function([](double t) { return std::sin(t); }, name, [](double t) { return std::cos(t); });
  } else if (name == "exp") {
    f = make_function([](double t) { return std::exp(t); }, name, [](double t) { return std::exp(t); });
  } else {
    throw ConfigError("unknown function '" + name + "'");
  }
  f.name = name;
  return f;
}

inline RealFunction linear_combination(double alpha, const RealFunction& f, double beta, const RealFunction& g) {
  RealFunction h;
  h.fn = [=](double x) { return alpha * f(x) + beta * g(x); };
  h.left = quad::combine(f.left, g.left);
  h.right = quad::combine(f.right, g.right);
  h.breakpoints = f.breakpoints;
  h.breakpoints.insert(h.breakpoints.end(), g.breakpoints.begin(), g.breakpoints.end());
  if (f.has_derivative() && g.has_derivative()) {
    h.derivative = [=](double x) { return alpha * f.derivative(x) + beta * g.derivative(x); };
  }
  h.name = "lincomb";
  return h;
}

// ---------------------------------------------------------------------------

struct OperatorContext {
  Kernel kernel;
  std::optional<Kernel> conjugate;
  WeightFunction weight = WeightFunction::unit();
  double tol = 1e-11;
  /// Target of the Richardson derivative; steps scale like deriv_tol^(1/3).
  double deriv_tol = 1e-9;
  std::optional<ConjugacyReport> conjugacy;

  double a() const { return weight.a; }
  double b() const { return weight.b; }

  static OperatorContext single(Kernel k, WeightFunction w, double tol = 1e-11) {
    OperatorContext c;
    c.kernel = std::move(k);
    c.weight = std::move(w);
    c.tol = tol;
    return c;
  }

  /// Context for a conjugate pair (kernel = k, conjugate = k'). The pair is
  /// checked on a coarse triangular grid; RelationViolated if it fails.
  static OperatorContext pair(const KernelPair& p, double tol = 1e-11, int check_grid = 8) {
    if (!p.conjugate) throw DomainError("OperatorContext::pair: kernel has no conjugate");
    OperatorContext c;
    c.kernel = p.kernel;
    c.conjugate = p.conjugate;
    c.weight = p.weight;
    c.tol = tol;
    c.conjugacy = check_conjugacy(p.kernel, *p.conjugate, p.weight, triangular_grid(p.weight.a, p.weight.b, check_grid),
                                  default_conjugacy_tolerance(p.kernel, *p.conjugate));
    if (!c.conjugacy->conjugate) {
      throw RelationViolated("kernels " + p.kernel.name + " and " + p.conjugate->name + " are not conjugate");
    }
    return c;
  }

  /// The context whose kernel is the conjugate k'; derivatives use it.
  OperatorContext derivative_context() const {
    if (!conjugate) throw DomainError("operator context has no conjugate kernel");
    OperatorContext c = *this;
    c.kernel = *conjugate;
    c.conjugate = kernel;
    return c;
  }

  OperatorContext with_kernel(Kernel k) const {
    OperatorContext c = *this;
    c.kernel = std::move(k);
    c.conjugate.reset();
    c.conjugacy.reset();
    return c;
  }
};

namespace detail {

inline std::vector<double> breakpoints_within(const RealFunction& f, double lo, double hi) {
  std::vector<double> out;
  for (double t : f.breakpoints) {
    if (t > lo && t < hi) out.push_back(t);
  }
  return out;
}

inline void require_no_ils(const RealFunction& f) {
  if (f.left.kind == quad::EndpointKind::inverse_log_square || f.right.kind == quad::EndpointKind::inverse_log_square) {
    throw DomainError("functions with inverse-log-square endpoint behavior are not supported as operands");
  }
}

}  // namespace detail

/// (I_a^k f)(x) = int_a^x k(x, y) f(y) omega(y) dy.
inline quad::QuadResult left_integral_result(const OperatorContext& ctx, const RealFunction& f, double x) {
  const double a = ctx.a(), b = ctx.b();
  if (!(x >= a && x <= b)) throw DomainError("left_integral: x outside [a, b]");
  if (x == a || f.is_zero) return {};
  detail::require_no_ils(f);
  const Kernel& k = ctx.kernel;
  const WeightFunction& w = ctx.weight;
  auto integrand = [&](const quad::Node& n) {
    const Separation s{n.to_b, n.scaled == quad::ScaledSide::right, n.log_gap};
    return k.eval(x, n.t, s) * f.eval_from_left(n.t, n.from_a, a) * w(n.t);
  };
  quad::SingularSpec spec{quad::combine(k.left, f.left), k.diagonal};
  if (x == b) spec.right = quad::combine(k.diagonal, f.right);
  quad::QuadOptions opt;
  opt.rel_tol = ctx.tol;
  opt.breakpoints = detail::breakpoints_within(f, a, x);
  return quad::integrate_singular(integrand, a, x, spec, ctx.tol, opt);
}

inline double left_integral(const OperatorContext& ctx, const RealFunction& f, double x) {
  return quad::checked(left_integral_result(ctx, f, x), "left_integral");
}

/// (I_b^k f)(x) = int_x^b k(y, x) f(y) omega(y) dy.
inline quad::QuadResult right_integral_result(const OperatorContext& ctx, const RealFunction& f, double x) {
  const double a = ctx.a(), b = ctx.b();
  if (!(x >= a && x <= b)) throw DomainError("right_integral: x outside [a, b]");
  if (x == b || f.is_zero) return {};
  detail::require_no_ils(f);
  const Kernel& k = ctx.kernel;
  const WeightFunction& w = ctx.weight;
  auto integrand = [&](const quad::Node& n) {
    const Separation s{n.from_a, n.scaled == quad::ScaledSide::left, n.log_gap};
    return k.eval(n.t, x, s) * f.eval_from_right(n.t, n.to_b, b) * w(n.t);
  };
  quad::SingularSpec spec{k.diagonal, f.right};
  if (x == a) spec.left = quad::combine(k.diagonal, f.left);
  quad::QuadOptions opt;
  opt.rel_tol = ctx.tol;
  opt.breakpoints = detail::breakpoints_within(f, x, b);
  return quad::integrate_singular(integrand, x, b, spec, ctx.tol, opt);
}

inline double right_integral(const OperatorContext& ctx, const RealFunction& f, double x) {
  return quad::checked(right_integral_result(ctx, f, x), "right_integral");
}

/// Evaluations closer than this fraction of b - a to an endpoint are refused
/// by the derivative operations.
inline constexpr double kDerivativeMargin = 1e-4;

namespace detail {

// Bounded-variation proxy on a difference stencil: the samples may turn at
// most once, up to a noise floor. Absolute continuity has no finite test, so
// this is what the derivative operations require of I^{k'} f.
inline bool bounded_variation(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) return true;
  double lo = samples.front().second, hi = lo, tv = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i].second;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mag = std::max(mag, std::abs(v));
    if (i > 0) tv += std::abs(v - samples[i - 1].second);
  }
  return tv <= 2.0 * (hi - lo) + 1e-9 * std::max(1.0, mag);
}

// d/dx g at x, for g with a possible power-type singularity at `end`.
// Within a quarter of the interval from that end the derivative is taken in
// the variable s = ln|x - end|, which keeps the stencil well inside the
// region where g is smooth.
template <class G>
double derivative_near(G&& g, double x, double end, double a, double b, double tol, const char* what) {
  const double len = b - a;
  const double dist = std::abs(x - end);
  const double sgn = x >= end ? 1.0 : -1.0;
  quad::DerivativeResult r;
  double scale = 1.0;
  if (dist < 0.25 * len) {
    auto G2 = [&](double s) { return g(end + sgn * std::exp(s)); };
    const double s0 = std::log(dist);
    // Keep the far side of the stencil inside [a, b].
    r = quad::derivative(G2, s0, tol, -std::numeric_limits<double>::infinity(), std::log(len));
    scale = sgn / dist;
  } else {
    r = quad::derivative(g, x, tol, a, b);
  }
  for (const auto& [t, v] : r.samples) {
    if (!std::isfinite(v)) throw DerivativeError(std::string(what) + ": non-finite sample near x", NAN, INFINITY);
  }
  if (!bounded_variation(r.samples)) {
    throw DerivativeError(std::string(what) + ": integral is not of bounded variation on the stencil at x = " +
                              std::to_string(x),
                          r.value * scale, INFINITY);
  }
  if (!r.converged) {
    throw DerivativeError(std::string(what) + ": extrapolation did not converge at x = " + std::to_string(x),
                          r.value * scale, r.error_estimate * std::abs(scale));
  }
  return r.value * scale;
}

inline void check_derivative_point(const OperatorContext& ctx, double x, const char* what) {
  const double margin = kDerivativeMargin * (ctx.b() - ctx.a());
  if (!(x >= ctx.a() + margin && x <= ctx.b() - margin)) {
    throw DomainError(std::string(what) + ": x must stay at least 1e-4 (b - a) away from the endpoints");
  }
}

}  // namespace detail

/// (D_a^{k'} f)(x) = (1/omega(x)) d/dx (I_a^{k'} f)(x), with ctx.kernel as k'.
inline double left_derivative(const OperatorContext& ctx, const RealFunction& f, double x) {
  detail::check_derivative_point(ctx, x, "left_derivative");
  if (f.is_zero) return 0.0;
  auto g = [&](double t) { return left_integral(ctx, f, t); };
  return detail::derivative_near(g, x, ctx.a(), ctx.a(), ctx.b(), ctx.deriv_tol, "left_derivative") / ctx.weight(x);
}

/// (D_b^{k'} f)(x) = -(1/omega(x)) d/dx (I_b^{k'} f)(x), with ctx.kernel as k'.
inline double right_derivative(const OperatorContext& ctx, const RealFunction& f, double x) {
  detail::check_derivative_point(ctx, x, "right_derivative");
  if (f.is_zero) return 0.0;
  auto g = [&](double t) { return right_integral(ctx, f, t); };
  return -detail::derivative_near(g, x, ctx.b(), ctx.a(), ctx.b(), ctx.deriv_tol, "right_derivative") /
         ctx.weight(x);
}

enum class Side { left, right };

/// Function-valued left (I_a^k) or right (I_b^k) integral, for nesting.
inline RealFunction integral_as_function(const OperatorContext& ctx, const RealFunction& f, Side side) {
  RealFunction g;
  auto c = std::make_shared<OperatorContext>(ctx);
  auto ff = std::make_shared<RealFunction>(f);
  if (side == Side::left) {
    g.fn = [c, ff](double x) { return left_integral(*c, *ff, std::clamp(x, c->a(), c->b())); };
  } else {
    g.fn = [c, ff](double x) { return right_integral(*c, *ff, std::clamp(x, c->a(), c->b())); };
  }
  g.is_zero = f.is_zero;
  g.name = (side == Side::left ? "I_a[" : "I_b[") + f.name + "]";
  return g;
}

/// Tabulated derivative D^{k'} f (ctx.kernel plays k') as a function on [a, b].
///
/// D is sampled on a mesh graded toward the derivative's base point (a for
/// the left-sided operator, b for the right-sided one), starting
/// 1e-4 (b - a) away from it. Near that point D behaves like
/// c0 + c1 k'(d) with d the distance; c1 is fitted from the first nodes and
/// the singular part is carried analytically, while the remainder is
/// interpolated by local cubics and extended to the endpoints.
inline RealFunction derivative_as_function(const OperatorContext& ctx, const RealFunction& f, Side side) {
  const double a = ctx.a(), b = ctx.b(), len = b - a;
  if (f.is_zero) {
    RealFunction z = constant_function(0.0);
    z.a = a;
    z.b = b;
    return z;
  }
  const double d0 = 1.0001 * kDerivativeMargin * len;
  std::vector<double> dist;
  for (double d = d0; d < 0.05 * len; d *= 1.5) dist.push_back(d);
  const int n_uniform = 40;
  for (int i = 2; i < n_uniform; ++i) dist.push_back(len * i / n_uniform);
  dist.push_back(len - d0);

  const Kernel& kp = ctx.kernel;
  auto point = [&](double d) { return side == Side::left ? a + d : b - d; };
  std::vector<double> vals;
  vals.reserve(dist.size());
  for (double d : dist) {
    const double x = point(d);
    vals.push_back(side == Side::left ? left_derivative(ctx, f, x) : right_derivative(ctx, f, x));
  }

  // Shape of the singular part: k'(x, a) for the left side, k'(b, x) for the right.
  std::function<double(double)> shape;
  const bool algebraic_or_log = kp.diagonal.kind == quad::EndpointKind::algebraic ||
                                kp.diagonal.kind == quad::EndpointKind::logarithmic;
  if (algebraic_or_log) {
    if (side == Side::left) {
      shape = [kp, a](double d) { return kp.eval(a + d, a, Separation{d, false, 0.0}); };
    } else {
      shape = [kp, b](double d) { return kp.eval(b, b - d, Separation{d, false, 0.0}); };
    }
  }
  double c1 = 0.0;
  if (shape) {
    // Fit D ~ c0 + c1 shape(d) + c2 d on the first three nodes.
    const double s[3] = {shape(dist[0]), shape(dist[1]), shape(dist[2])};
    const double m[3][3] = {{1.0, s[0], dist[0]}, {1.0, s[1], dist[1]}, {1.0, s[2], dist[2]}};
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const double det1 = m[0][0] * (vals[1] * m[2][2] - m[1][2] * vals[2]) -
                        vals[0] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * vals[2] - vals[1] * m[2][0]);
    if (det != 0.0) c1 = det1 / det;
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    // A fitted coefficient this small is noise: the function is regular there.
    if (std::abs(c1 * s[0]) < 1e-9 * std::max(1.0, scale)) c1 = 0.0;
  }
  std::vector<double> rem(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) rem[i] = vals[i] - (c1 != 0.0 ? c1 * shape(dist[i]) : 0.0);
  auto table = std::make_shared<GridFunction>(dist, rem, 3);

  RealFunction out;
  out.a = a;
  out.b = b;
  out.name = "D[" + f.name + "]";
  if (c1 != 0.0) {
    (side == Side::left ? out.left : out.right) = kp.diagonal;
  }
  auto by_distance = [table, shape, c1](double d) {
    const double r = (*table)(d);
    return c1 != 0.0 ? r + c1 * shape(d) : r;
  };
  if (side == Side::left) {
    out.fn = [by_distance, a](double x) { return by_distance(x - a); };
    out.at_left = by_distance;
    out.at_right = [by_distance, len](double d) { return by_distance(len - d); };
  } else {
    out.fn = [by_distance, b](double x) { return by_distance(b - x); };
    out.at_right = by_distance;
    out.at_left = [by_distance, len](double d) { return by_distance(len - d); };
  }
  return out;
}

/// Limit of g at `end` from inside, by Aitken's delta-squared process on
/// g(end +- 2^-j h).
template <class G>
double boundary_limit(G&& g, double end, double h, int levels = 24) {
  std::vector<double> v;
  for (int j = 0; j < levels; ++j) v.push_back(g(end + std::ldexp(h, -j)));
  const std::size_t n = v.size();
  double best = v.back();
  for (std::size_t i = n - 1; i >= 2 && i >= n - 3; --i) {
    const double d1 = v[i] - v[i - 1];
    const double d2 = v[i] - 2.0 * v[i - 1] + v[i - 2];
    if (d2 != 0.0 && std::isfinite(d1 * d1 / d2)) {
      best = v[i] - d1 * d1 / d2;
      break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Composition.

struct CompositionCheck {
  double nested = 0.0;
  double direct = 0.0;
  double difference() const { return std::abs(nested - direct); }
};

namespace detail {

inline void require_relation(const Kernel& k1, const Kernel& k2, const WeightFunction& w) {
  for (const auto& [x, y] : triangular_grid(w.a, w.b, 4)) {
    const double d = composition_delta(k1, k2, w, x, y, 1e-10);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw RelationViolated("composition kernel of " + k1.name + " and " + k2.name + " is not positive and finite");
    }
  }
}

}  // namespace detail

/// I_a^{k1}(I_a^{k2} f)(x) versus I_a^{k3} f with k3 = delta_{k1,k2}.
inline CompositionCheck compose_left(const OperatorContext& c1, const OperatorContext& c2, const RealFunction& f,
                                     double x) {
  detail::require_relation(c1.kernel, c2.kernel, c1.weight);
  CompositionCheck out;
  out.nested = left_integral(c1, integral_as_function(c2, f, Side::left), x);
  const CompositionKernel k3{c1.kernel, c2.kernel, c1.weight, 1e-12};
  out.direct = left_integral(c1.with_kernel(k3.as_kernel()), f, x);
  return out;
}

/// I_b^{k1}(I_b^{k2} f)(x) versus I_b^{k3} f with k3 = delta_{k2,k1}.
inline CompositionCheck compose_right(const OperatorContext& c1, const OperatorContext& c2, const RealFunction& f,
                                      double x) {
  detail::require_relation(c2.kernel, c1.kernel, c1.weight);
  CompositionCheck out;
  out.nested = right_integral(c1, integral_as_function(c2, f, Side::right), x);
  const CompositionKernel k3{c2.kernel, c1.kernel, c1.weight, 1e-12};
  out.direct = right_integral(c1.with_kernel(k3.as_kernel()), f, x);
  return out;
}

// ---------------------------------------------------------------------------
// Integration by parts.

struct IbpResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

/// int (I_a^k f) g omega  versus  int (I_b^k g) f omega over [a, b].
inline IbpResult integration_by_parts(const Kernel& k, const WeightFunction& w, const RealFunction& f,
                                      const RealFunction& g, double tol = 1e-11) {
  const auto ctx = OperatorContext::single(k, w, tol);
  quad::QuadOptions opt;
  opt.rel_tol = 10 * tol;
  opt.breakpoints = f.breakpoints;
  opt.breakpoints.insert(opt.breakpoints.end(), g.breakpoints.begin(), g.breakpoints.end());
  IbpResult r;
  auto lhs = [&](double x) { return g.is_zero ? 0.0 : left_integral(ctx, f, x) * g(x) * w(x); };
  auto rhs = [&](double x) { return f.is_zero ? 0.0 : right_integral(ctx, g, x) * f(x) * w(x); };
  r.lhs = quad::checked(quad::integrate_singular(lhs, w.a, w.b, {{}, g.right}, 10 * tol, opt), "ibp lhs");
  r.rhs = quad::checked(quad::integrate_singular(rhs, w.a, w.b, {f.left, {}}, 10 * tol, opt), "ibp rhs");
  return r;
}

inline double integration_by_parts_residual(const Kernel& k, const WeightFunction& w, const RealFunction& f,
                                            const RealFunction& g, double tol = 1e-11) {
  return integration_by_parts(k, w, f, g, tol).residual();
}

// ---------------------------------------------------------------------------
// Inversion.

struct InversionDefect {
  double composed = 0.0;        // I^k (D^{k'} f)(x)
  double predicted = 0.0;       // f(x) -/+ boundary term
  double boundary_value = 0.0;  // (I_a^{k'} f)(a) or (I_b^{k'} f)(b)
  double defect() const { return std::abs(composed - predicted); }
};

/// I_a^k(D_a^{k'} f)(x) versus f(x) - (I_a^{k'} f)(a) (1/omega) d/dx delta_{k,1}(x, a).
/// ctx holds the pair (kernel = k, conjugate = k').
inline InversionDefect inversion_defect_left(const OperatorContext& ctx, const RealFunction& f, double x) {
  const OperatorContext dctx = ctx.derivative_context();
  const double a = ctx.a(), len = ctx.b() - ctx.a();
  InversionDefect out;
  const RealFunction df = derivative_as_function(dctx, f, Side::left);
  out.composed = left_integral(ctx, df, x);
  out.boundary_value = boundary_limit([&](double t) { return left_integral(dctx, f, t); }, a, 0.1 * len);
  out.predicted = f(x);
  if (std::abs(out.boundary_value) > 1e-12) {
    const RealFunction one = constant_function(1.0);
    auto delta_k1 = [&](double t) { return left_integral(ctx, one, t); };
    const double slope = detail::derivative_near(delta_k1, x, a, a, ctx.b(), ctx.deriv_tol, "inversion_defect_left");
    out.predicted -= out.boundary_value * slope / ctx.weight(x);
  }
  return out;
}

/// I_b^k(D_b^{k'} f)(x) versus f(x) + (I_b^{k'} f)(b) (1/omega) d/dx delta_{1,k}(b, x).
inline InversionDefect inversion_defect_right(const OperatorContext& ctx, const RealFunction& f, double x) {
  const OperatorContext dctx = ctx.derivative_context();
  const double b = ctx.b(), len = ctx.b() - ctx.a();
  InversionDefect out;
  const RealFunction df = derivative_as_function(dctx, f, Side::right);
  out.composed = right_integral(ctx, df, x);
  out.boundary_value = boundary_limit([&](double t) { return right_integral(dctx, f, t); }, b, -0.1 * len);
  out.predicted = f(x);
  if (std::abs(out.boundary_value) > 1e-12) {
    // delta_{1,k}(b, x) = int_x^b k(z, x) omega(z) dz = (I_b^k 1)(x)
    const RealFunction one = constant_function(1.0);
    auto delta_1k = [&](double t) { return right_integral(ctx, one, t); };
    const double slope = detail::derivative_near(delta_1k, x, b, ctx.a(), b, ctx.deriv_tol, "inversion_defect_right");
    out.predicted += out.boundary_value * slope / ctx.weight(x);
  }
  return out;
}

}  // namespace gfc
