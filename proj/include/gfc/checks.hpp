#pragma once

// Named identity checks shared by the CLI `verify` suites and the
// acceptance runner. Each check reports a residual against a tolerance.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gfc/fractional.hpp"
#include "gfc/kernels.hpp"
#include "gfc/operators.hpp"

namespace gfc::checks {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  /// Set when the check could not be evaluated.
  std::string error;

  bool passed() const { return error.empty() && std::isfinite(residual) && residual <= tolerance; }
};

inline bool all_passed(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.passed(); });
}

inline double max_residual(const std::vector<Check>& cs) {
  double m = 0.0;
  for (const auto& c : cs) m = std::max(m, c.residual);
  return m;
}

/// Runs `body` and records its residual, or the error it raised.
template <class Body>
Check run(std::string name, double tolerance, Body&& body) {
  Check c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  try {
    c.residual = body();
  } catch (const Error& e) {
    c.residual = NAN;
    c.error = e.what();
  }
  return c;
}

/// n equally spaced interior points of [a, b].
inline std::vector<double> interior_grid(double a, double b, int n = 9) {
  std::vector<double> xs;
  for (int i = 1; i <= n; ++i) xs.push_back(a + (b - a) * i / (n + 1));
  return xs;
}

// ---------------------------------------------------------------------------
// Composition.

/// I^{k1}(I^{k2} f) against I^{delta} f at x_i = a + i (b - a)/10, i = 1..10.
inline Check composition_check(const std::string& name, const OperatorContext& c1, const OperatorContext& c2,
                               const RealFunction& f, Side side, double tol) {
  return run(name, tol, [&] {
    double m = 0.0;
    for (int i = 1; i <= 10; ++i) {
      double x = c1.a() + (c1.b() - c1.a()) * i / 10.0;
      if (side == Side::right) x = c1.b() - (x - c1.a());
      const auto r = side == Side::left ? compose_left(c1, c2, f, x) : compose_right(c1, c2, f, x);
      m = std::max(m, r.difference());
    }
    return m;
  });
}

/// A conjugate pair composes to the plain integral: I^k(I^{k'} f) = int f omega.
inline Check pair_to_plain_check(const std::string& name, const KernelPair& p, const RealFunction& f, Side side,
                                 double tol) {
  return run(name, tol, [&] {
    const auto c1 = OperatorContext::single(p.kernel, p.weight);
    const auto c2 = OperatorContext::single(*p.conjugate, p.weight);
    const auto plain = OperatorContext::single(make_unit_kernel(p.weight.a, p.weight.b), p.weight);
    double m = 0.0;
    for (int i = 1; i <= 10; ++i) {
      double x = p.weight.a + (p.weight.b - p.weight.a) * i / 10.0;
      if (side == Side::right) x = p.weight.b - (x - p.weight.a);
      const double nested = side == Side::left ? left_integral(c1, integral_as_function(c2, f, Side::left), x)
                                               : right_integral(c1, integral_as_function(c2, f, Side::right), x);
      const double direct = side == Side::left ? left_integral(plain, f, x) : right_integral(plain, f, x);
      m = std::max(m, std::abs(nested - direct));
    }
    return m;
  });
}

// ---------------------------------------------------------------------------
// Inversion.

/// max |D^{k'}(I^k f) - f| over the interior grid.
inline Check left_inverse_check(const std::string& name, const OperatorContext& ctx, const RealFunction& f, Side side,
                                double tol, int n = 9) {
  return run(name, tol, [&] {
    const auto d = ctx.derivative_context();
    const RealFunction If = integral_as_function(ctx, f, side);
    double m = 0.0;
    for (double x : interior_grid(ctx.a(), ctx.b(), n)) {
      const double v = side == Side::left ? left_derivative(d, If, x) : right_derivative(d, If, x);
      m = std::max(m, std::abs(v - f(x)));
    }
    return m;
  });
}

/// With g = I^k phi: max |I^k(D^{k'} g) - g| over the interior grid.
inline Check range_inverse_check(const std::string& name, const OperatorContext& ctx, const RealFunction& phi,
                                 Side side, double tol, int n = 9) {
  return run(name, tol, [&] {
    const auto d = ctx.derivative_context();
    const RealFunction g = integral_as_function(ctx, phi, side);
    const RealFunction Dg = derivative_as_function(d, g, side);
    double m = 0.0;
    for (double x : interior_grid(ctx.a(), ctx.b(), n)) {
      const double v = side == Side::left ? left_integral(ctx, Dg, x) : right_integral(ctx, Dg, x);
      m = std::max(m, std::abs(v - g(x)));
    }
    return m;
  });
}

/// Left and right, both identities, for each function name.
inline std::vector<Check> inversion_checks(const std::string& label, const KernelPair& pair,
                                           const std::vector<std::string>& functions, double tol, int n = 9) {
  std::vector<Check> out;
  const auto ctx = OperatorContext::pair(pair);
  for (const auto& fn : functions) {
    const RealFunction f = registered_function(fn);
    for (Side side : {Side::left, Side::right}) {
      const std::string s = side == Side::left ? "left" : "right";
      out.push_back(left_inverse_check(label + " D(I f)=f " + s + " f=" + fn, ctx, f, side, tol, n));
      out.push_back(range_inverse_check(label + " I(D g)=g " + s + " phi=" + fn, ctx, f, side, tol, n));
    }
  }
  return out;
}

/// |composed - predicted| of the boundary-defect formula at the given points.
inline Check defect_check(const std::string& name, const OperatorContext& ctx, const RealFunction& f, Side side,
                          const std::vector<double>& xs, double tol) {
  return run(name, tol, [&] {
    double m = 0.0;
    for (double x : xs) {
      const auto d = side == Side::left ? inversion_defect_left(ctx, f, x) : inversion_defect_right(ctx, f, x);
      m = std::max(m, d.defect());
    }
    return m;
  });
}

// ---------------------------------------------------------------------------
// Fractional operators on [0, 1].

/// H^a(S^a f) and S^a(H^a f) against int_0^x f at x = 0.1, ..., 1.
inline Check comphs_check(const std::string& name, double alpha, const RealFunction& f, double tol) {
  return run(name, tol, [&] {
    const auto c1 = frac::type1_context(alpha);
    const auto c2 = frac::type2_context(alpha);
    const auto plain = OperatorContext::single(make_unit_kernel(), WeightFunction::unit());
    double m = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double x = i / 10.0;
      const double target = left_integral(plain, f, x);
      const double hs = left_integral(c1, integral_as_function(c2, f, Side::left), x);
      const double sh = left_integral(c2, integral_as_function(c1, f, Side::left), x);
      m = std::max({m, std::abs(hs - target), std::abs(sh - target)});
    }
    return m;
  });
}

/// Direct d/dx S^{theta-1} f against the representation formula, both sides.
inline Check representation_check(const std::string& name, double theta, const RealFunction& f, double tol,
                                  int n = 9) {
  return run(name, tol, [&] {
    double m = 0.0;
    for (double x : interior_grid(0.0, 1.0, n)) {
      const auto l = frac::frac_derivative_left(theta, f, x);
      const auto r = frac::frac_derivative_right(theta, f, x);
      m = std::max({m, std::abs(l.direct - *l.representation), std::abs(r.direct - *r.representation)});
    }
    return m;
  });
}

inline Check katr_check(const std::string& name, double theta, const RealFunction& f, Side side,
                        const std::vector<double>& xs, double tol) {
  return run(name, tol, [&] {
    double m = 0.0;
    for (double x : xs) {
      const auto k = side == Side::left ? frac::katr_left(theta, f, x) : frac::katr_right(theta, f, x);
      m = std::max(m, k.defect());
    }
    return m;
  });
}

// ---------------------------------------------------------------------------
// Error ladders.

struct Ladder {
  std::vector<double> parameters;
  std::vector<double> errors;
  /// Strictly decreasing, or identically zero.
  bool monotone() const {
    if (std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; })) return true;
    for (std::size_t i = 1; i < errors.size(); ++i) {
      if (!(errors[i] < errors[i - 1])) return false;
    }
    return true;
  }
};

/// ||S^a f - f||_{L1} over the given alphas.
inline Ladder identity_ladder(const RealFunction& f, const std::vector<double>& alphas, Side side) {
  Ladder l;
  for (double a : alphas) {
    l.parameters.push_back(a);
    l.errors.push_back(frac::approx_identity_error(f, a, side));
  }
  return l;
}

/// ||D^theta f -/+ f'||_{L1} over the given thetas.
inline Ladder derivative_ladder(const RealFunction& f, const std::vector<double>& thetas, Side side) {
  Ladder l;
  for (double t : thetas) {
    l.parameters.push_back(t);
    l.errors.push_back(frac::derivative_approx_error(f, t, side));
  }
  return l;
}

}  // namespace gfc::checks
