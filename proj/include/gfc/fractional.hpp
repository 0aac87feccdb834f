#pragma once

// Fractional operators on [0, 1] built on the Volterra/E1 conjugate pair:
//   H_0^a f(x) = int_0^x F((x-y)/a) f(y) dy        (type I)
//   S_0^a f(x) = (1/a) int_0^x E1((x-y)/a) f(y) dy  (type II)
// with right-sided mirrors H_1, S_1, and the derivatives
//   D_0^t f = d/dx S_0^{t-1} f,   D_1^t f = -d/dx S_1^{t-1} f.

#include <cmath>
#include <optional>
#include <vector>

#include "gfc/kernels.hpp"
#include "gfc/operators.hpp"
#include "gfc/specfun.hpp"

namespace gfc::frac {

/// Smallest theta - 1 accepted by the derivative operations.
inline constexpr double kMinOrderGap = 1e-3;

inline OperatorContext type1_context(double alpha, double tol = 1e-11) {
  return OperatorContext::single(make_volterra_kernel(alpha), WeightFunction::unit(0.0, 1.0), tol);
}

inline OperatorContext type2_context(double alpha, double tol = 1e-11) {
  return OperatorContext::single(make_e1_kernel(alpha), WeightFunction::unit(0.0, 1.0), tol);
}

/// The pair (k = F-kernel, k' = E1-kernel) of order alpha, without the grid check.
inline OperatorContext pair_context(double alpha, double tol = 1e-11) {
  OperatorContext c = type1_context(alpha, tol);
  c.conjugate = make_e1_kernel(alpha);
  return c;
}

inline double h0(double alpha, const RealFunction& f, double x) { return left_integral(type1_context(alpha), f, x); }
inline double h1(double alpha, const RealFunction& f, double x) { return right_integral(type1_context(alpha), f, x); }
inline double s0(double alpha, const RealFunction& f, double x) { return left_integral(type2_context(alpha), f, x); }
inline double s1(double alpha, const RealFunction& f, double x) { return right_integral(type2_context(alpha), f, x); }

inline double frac_integral_type1_left(double alpha, const RealFunction& f, double x) { return h0(alpha, f, x); }
inline double frac_integral_type1_right(double alpha, const RealFunction& f, double x) { return h1(alpha, f, x); }
inline double frac_integral_type2_left(double alpha, const RealFunction& f, double x) { return s0(alpha, f, x); }
inline double frac_integral_type2_right(double alpha, const RealFunction& f, double x) { return s1(alpha, f, x); }

/// S_0^a 1 (x) = (x/a) E1(x/a) - exp(-x/a) + 1.
inline double s0_of_one(double alpha, double x) {
  if (x <= 0.0) return 0.0;
  const double u = x / alpha;
  return u * exp_integral_e1(u) - std::exp(-u) + 1.0;
}

struct FracDerivative {
  double direct = 0.0;
  /// Present when f carries its derivative.
  std::optional<double> representation;
};

namespace detail {

inline double order_gap(double theta) {
  const double beta = theta - 1.0;
  if (!(beta >= kMinOrderGap)) {
    throw DomainError("fractional derivative: theta - 1 must be at least 1e-3, got " + std::to_string(beta));
  }
  return beta;
}

inline RealFunction derivative_of(const RealFunction& f) {
  RealFunction d = make_function(f.derivative, "d[" + f.name + "]");
  return d;
}

// f(0) E1(x/b)/b + S_0^b(f')(x)
inline double representation_left(double beta, const RealFunction& f, double x) {
  const double f0 = f(0.0);
  const double head = f0 != 0.0 ? f0 * exp_integral_e1(x / beta) / beta : 0.0;
  return head + s0(beta, derivative_of(f), x);
}

// f(1) E1((1-x)/b)/b - S_1^b(f')(x)
inline double representation_right(double beta, const RealFunction& f, double x) {
  const double f1 = f(1.0);
  const double head = f1 != 0.0 ? f1 * exp_integral_e1((1.0 - x) / beta) / beta : 0.0;
  return head - s1(beta, derivative_of(f), x);
}

}  // namespace detail

/// D_0^theta f (x) = d/dx S_0^{theta-1} f (x); theta - 1 >= 1e-3.
inline FracDerivative frac_derivative_left(double theta, const RealFunction& f, double x) {
  const double beta = detail::order_gap(theta);
  FracDerivative out;
  out.direct = left_derivative(type2_context(beta), f, x);
  if (f.has_derivative()) out.representation = detail::representation_left(beta, f, x);
  return out;
}

/// D_1^theta f (x) = -d/dx S_1^{theta-1} f (x); theta - 1 >= 1e-3.
inline FracDerivative frac_derivative_right(double theta, const RealFunction& f, double x) {
  const double beta = detail::order_gap(theta);
  FracDerivative out;
  out.direct = right_derivative(type2_context(beta), f, x);
  if (f.has_derivative()) out.representation = detail::representation_right(beta, f, x);
  return out;
}

namespace detail {

// Breakpoints at multiples of the kernel scale, where S^a f changes character.
inline std::vector<double> scale_breakpoints(double alpha) {
  std::vector<double> bp;
  const double step = std::max(alpha, 1.0 / 64);
  for (double t = step; t < 1.0 - 1e-12; t += step) bp.push_back(t);
  for (double t = 0.5 * alpha; t > 1e-6; t *= 0.25) bp.push_back(t);
  for (double t = 1.0 - 0.5 * alpha; t < 1.0 - 1e-6; t = 1.0 - 0.25 * (1.0 - t)) bp.push_back(t);
  return bp;
}

template <class G>
double l1_norm(G&& g, const std::vector<double>& bp, double tol) {
  quad::QuadOptions opt;
  opt.breakpoints = bp;
  opt.rel_tol = tol;
  auto abs_g = [&](double x) { return std::abs(g(x)); };
  return quad::checked(quad::integrate(abs_g, 0.0, 1.0, tol, opt), "L1 norm");
}

}  // namespace detail

/// ||S_0^a f - f||_{L1[0,1]} (side left) or ||S_1^a f - f|| (side right).
inline double approx_identity_error(const RealFunction& f, double alpha, Side side, double tol = 1e-10) {
  if (!(alpha > 0.0)) throw DomainError("approx_identity_error: alpha must be positive");
  if (f.is_zero) return 0.0;
  const auto ctx = type2_context(alpha, 1e-12);
  auto g = [&](double x) {
    const double s = side == Side::left ? left_integral(ctx, f, x) : right_integral(ctx, f, x);
    return s - f(x);
  };
  return detail::l1_norm(g, detail::scale_breakpoints(alpha), tol);
}

/// ||D_0^theta f - f'||_{L1} (left) or ||D_1^theta f + f'||_{L1} (right),
/// evaluated through the representation formula; f must carry f'.
inline double derivative_approx_error(const RealFunction& f, double theta, Side side, double tol = 1e-10) {
  const double beta = detail::order_gap(theta);
  if (f.is_zero) return 0.0;
  if (!f.has_derivative()) throw DomainError("derivative_approx_error: f must carry its derivative");
  auto g = [&](double x) {
    if (side == Side::left) {
      if (x <= 0.0) x = 1e-300;
      return detail::representation_left(beta, f, x) - f.derivative(x);
    }
    if (x >= 1.0) x = 1.0 - 1e-16;
    return detail::representation_right(beta, f, x) + f.derivative(x);
  };
  return detail::l1_norm(g, detail::scale_breakpoints(beta), tol);
}

struct KatrCheck {
  double composed = 0.0;   // H^{t-1}(D^t f)(x)
  double predicted = 0.0;  // f(x) - (S^{t-1} f)(end) F(dist/(t-1))
  double boundary_value = 0.0;
  double defect() const { return std::abs(composed - predicted); }
};

/// H_0^{t-1}(D_0^t f)(x) against f(x) - (S_0^{t-1} f)(0) F(x/(t-1)).
inline KatrCheck katr_left(double theta, const RealFunction& f, double x) {
  const double beta = detail::order_gap(theta);
  const auto ctx = pair_context(beta);
  KatrCheck out;
  const RealFunction d = derivative_as_function(ctx.derivative_context(), f, Side::left);
  out.composed = left_integral(ctx, d, x);
  out.boundary_value = boundary_limit([&](double t) { return s0(beta, f, t); }, 0.0, 0.1);
  out.predicted = f(x) - out.boundary_value * volterra_table().eval(x / beta);
  return out;
}

/// H_1^{t-1}(D_1^t f)(x) against f(x) - (S_1^{t-1} f)(1) F((1-x)/(t-1)).
inline KatrCheck katr_right(double theta, const RealFunction& f, double x) {
  const double beta = detail::order_gap(theta);
  const auto ctx = pair_context(beta);
  KatrCheck out;
  const RealFunction d = derivative_as_function(ctx.derivative_context(), f, Side::right);
  out.composed = right_integral(ctx, d, x);
  out.boundary_value = boundary_limit([&](double t) { return s1(beta, f, t); }, 1.0, -0.1);
  out.predicted = f(x) - out.boundary_value * volterra_table().eval((1.0 - x) / beta);
  return out;
}

/// |int_0^1 f D_0^t g - int_0^1 (D_1^t f) g| with f = H_1^{t-1} phi_f and
/// g = H_0^{t-1} phi_g.
struct FracIbp {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

inline FracIbp frac_ibp(double theta, const RealFunction& phi_f, const RealFunction& phi_g, double tol = 1e-10) {
  const double beta = detail::order_gap(theta);
  const auto pair = pair_context(beta);
  const auto dctx = pair.derivative_context();
  const RealFunction f = integral_as_function(pair, phi_f, Side::right);
  const RealFunction g = integral_as_function(pair, phi_g, Side::left);
  FracIbp out;
  if (phi_f.is_zero || phi_g.is_zero) return out;
  const RealFunction dg = derivative_as_function(dctx, g, Side::left);
  const RealFunction df = derivative_as_function(dctx, f, Side::right);
  quad::QuadOptions opt;
  opt.rel_tol = tol;
  auto lhs = [&](const quad::Node& n) { return f(n.t) * dg.eval_from_left(n.t, n.from_a, 0.0); };
  auto rhs = [&](const quad::Node& n) { return df.eval_from_right(n.t, n.to_b, 1.0) * g(n.t); };
  out.lhs = quad::checked(quad::integrate_singular(lhs, 0.0, 1.0, {dg.left, {}}, tol, opt), "frac_ibp lhs");
  out.rhs = quad::checked(quad::integrate_singular(rhs, 0.0, 1.0, {{}, df.right}, tol, opt), "frac_ibp rhs");
  return out;
}

inline double frac_ibp_residual(double theta, const RealFunction& phi_f, const RealFunction& phi_g) {
  return frac_ibp(theta, phi_f, phi_g).residual();
}

}  // namespace gfc::frac
