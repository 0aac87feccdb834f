#pragma once

// Weight functions, kernel-functions on the triangle {a <= y < x <= b},
// composition kernels, membership and conjugacy checks, and the built-in
// kernel families.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/specfun.hpp"

namespace gfc {

struct WeightFunction {
  double a = 0.0;
  double b = 1.0;
  std::function<double(double)> eval;
  double sup_norm = 1.0;
  double inv_sup_norm = 1.0;
  std::string name = "unit";
  bool is_unit = false;

  double operator()(double x) const { return is_unit ? 1.0 : eval(x); }

  static WeightFunction unit(double a = 0.0, double b = 1.0) {
    check_interval(a, b);
    return {a, b, [](double) { return 1.0; }, 1.0, 1.0, "unit", true};
  }

  /// omega(x) = 1/x on [a, b], a > 0.
  static WeightFunction reciprocal(double a, double b) {
    check_interval(a, b);
    if (!(a > 0.0)) throw DomainError("reciprocal weight requires a > 0");
    return {a, b, [](double x) { return 1.0 / x; }, 1.0 / a, b, "reciprocal", false};
  }

  /// omega(x) = sigma x^(sigma-1) on [a, b], a > 0.
  static WeightFunction power(double sigma, double a, double b) {
    check_interval(a, b);
    if (!(sigma > 0.0)) throw DomainError("power weight requires sigma > 0");
    if (!(a > 0.0)) throw DomainError("power weight requires a > 0");
    if (sigma == 1.0) return unit(a, b);
    const double ea = sigma * std::pow(a, sigma - 1.0);
    const double eb = sigma * std::pow(b, sigma - 1.0);
    return {a, b, [sigma](double x) { return sigma * std::pow(x, sigma - 1.0); }, std::max(ea, eb),
            1.0 / std::min(ea, eb), "power", false};
  }

  /// Checks 0 < omega <= sup_norm and 1/omega <= inv_sup_norm on n + 1 points.
  bool check_bounds(int n = 64) const {
    for (int i = 0; i <= n; ++i) {
      const double x = a + (b - a) * i / n;
      const double w = (*this)(x);
      if (!(w > 0.0) || w > sup_norm * (1 + 1e-12) || 1.0 / w > inv_sup_norm * (1 + 1e-12)) return false;
    }
    return true;
  }

 private:
  static void check_interval(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
      throw DomainError("weight interval must satisfy a < b, both finite");
    }
  }
};

/// How a kernel is being evaluated: `gap` = x - y, exact to the caller's
/// precision. If `scaled` is set the caller sits at an inverse-log-square
/// diagonal and wants k * gap * log_gap^2, with log_gap = ln(gap / scale).
struct Separation {
  double gap = 0.0;
  bool scaled = false;
  double log_gap = 0.0;
};

struct Kernel {
  std::string name;
  std::function<double(double x, double y, const Separation&)> fn;
  /// Behavior as y -> x.
  quad::EndpointBehavior diagonal;
  /// Behavior as y -> a.
  quad::EndpointBehavior left;
  std::optional<std::function<double(double)>> closed_form_fk;
  std::optional<std::function<double(double)>> closed_form_gk;
  /// k(x, y) depends on x - y only.
  bool convolution = false;

  double operator()(double x, double y) const { return fn(x, y, Separation{x - y, false, 0.0}); }
  double eval(double x, double y, const Separation& s) const { return fn(x, y, s); }

  double diag_exponent() const {
    return diagonal.kind == quad::EndpointKind::algebraic ? diagonal.exponent : 0.0;
  }
  double left_exponent() const {
    return left.kind == quad::EndpointKind::algebraic ? left.exponent : 0.0;
  }
  bool logarithmic() const {
    return diagonal.kind == quad::EndpointKind::logarithmic ||
           diagonal.kind == quad::EndpointKind::inverse_log_square;
  }
};

namespace detail {

inline void require_alpha(double alpha, bool allow_one, const char* who) {
  const bool ok = allow_one ? (alpha > 0.0 && alpha <= 1.0) : (alpha > 0.0 && alpha < 1.0);
  if (!ok) {
    throw DomainError(std::string(who) + ": alpha must lie in " + (allow_one ? "(0, 1]" : "(0, 1)") +
                      ", got " + std::to_string(alpha));
  }
}

inline void require_positive_interval(double a, double b, const char* who) {
  if (!(a > 0.0 && a < b)) throw DomainError(std::string(who) + ": requires 0 < a < b");
}

// ln(x/y) for x = y + gap, accurate for small gaps.
inline double log_ratio(double y, double gap) { return std::log1p(gap / y); }

}  // namespace detail

inline Kernel make_unit_kernel(double a = 0.0, double b = 1.0) {
  Kernel k;
  k.name = "unit";
  k.fn = [](double, double, const Separation&) { return 1.0; };
  k.closed_form_fk = [b](double y) { return b - y; };
  k.closed_form_gk = [a](double y) { return y - a; };
  k.convolution = true;
  return k;
}

namespace detail {

inline Kernel rl_power_kernel(double beta, std::string name, double a, double b) {
  // (x - y)^(beta - 1) / Gamma(beta)
  const double inv_gamma = 1.0 / gamma_fn(beta);
  Kernel k;
  k.name = std::move(name);
  k.fn = [beta, inv_gamma](double, double, const Separation& s) {
    return std::pow(s.gap, beta - 1.0) * inv_gamma;
  };
  k.diagonal = quad::EndpointBehavior::algebraic(1.0 - beta);
  const double inv_gamma1 = 1.0 / gamma_fn(beta + 1.0);
  k.closed_form_fk = [=](double y) { return std::pow(b - y, beta) * inv_gamma1; };
  k.closed_form_gk = [=](double y) { return std::pow(y - a, beta) * inv_gamma1; };
  k.convolution = true;
  return k;
}

}  // namespace detail

/// (x - y)^(alpha - 1) / Gamma(alpha), alpha in (0, 1].
inline Kernel make_rl_kernel(double alpha, double a = 0.0, double b = 1.0) {
  detail::require_alpha(alpha, true, "make_rl_kernel");
  return detail::rl_power_kernel(alpha, "rl(" + std::to_string(alpha) + ")", a, b);
}

/// (x - y)^(-alpha) / Gamma(1 - alpha), alpha in (0, 1).
inline Kernel make_rl_conjugate(double alpha, double a = 0.0, double b = 1.0) {
  detail::require_alpha(alpha, false, "make_rl_conjugate");
  return detail::rl_power_kernel(1.0 - alpha, "rl_conjugate(" + std::to_string(alpha) + ")", a, b);
}

namespace detail {

inline Kernel hadamard_power(double beta, std::string name) {
  const double inv_gamma = 1.0 / gamma_fn(beta);
  Kernel k;
  k.name = std::move(name);
  k.fn = [beta, inv_gamma](double, double y, const Separation& s) {
    return std::pow(log_ratio(y, s.gap), beta - 1.0) * inv_gamma;
  };
  k.diagonal = quad::EndpointBehavior::algebraic(1.0 - beta);
  return k;
}

inline Kernel erdelyi_kober_power(double beta, double sigma, std::string name) {
  const double inv_gamma = 1.0 / gamma_fn(beta);
  Kernel k;
  k.name = std::move(name);
  k.fn = [beta, sigma, inv_gamma](double, double y, const Separation& s) {
    // x^sigma - y^sigma without cancellation.
    const double diff = std::pow(y, sigma) * std::expm1(sigma * log_ratio(y, s.gap));
    return std::pow(diff, beta - 1.0) * inv_gamma;
  };
  k.diagonal = quad::EndpointBehavior::algebraic(1.0 - beta);
  return k;
}

}  // namespace detail

/// (ln(x/y))^(alpha - 1) / Gamma(alpha), paired with omega(x) = 1/x.
inline Kernel make_hadamard_kernel(double alpha, double a, double b) {
  detail::require_alpha(alpha, false, "make_hadamard_kernel");
  detail::require_positive_interval(a, b, "make_hadamard_kernel");
  return detail::hadamard_power(alpha, "hadamard(" + std::to_string(alpha) + ")");
}

inline Kernel make_hadamard_conjugate(double alpha, double a, double b) {
  detail::require_alpha(alpha, false, "make_hadamard_conjugate");
  detail::require_positive_interval(a, b, "make_hadamard_conjugate");
  return detail::hadamard_power(1.0 - alpha, "hadamard_conjugate(" + std::to_string(alpha) + ")");
}

/// (x^sigma - y^sigma)^(alpha - 1) / Gamma(alpha), paired with
/// omega(x) = sigma x^(sigma - 1).
inline Kernel make_erdelyi_kober_kernel(double alpha, double sigma, double a, double b) {
  detail::require_alpha(alpha, false, "make_erdelyi_kober_kernel");
  detail::require_positive_interval(a, b, "make_erdelyi_kober_kernel");
  if (!(sigma > 0.0)) throw DomainError("make_erdelyi_kober_kernel: sigma must be positive");
  return detail::erdelyi_kober_power(alpha, sigma, "erdelyi_kober(" + std::to_string(alpha) + ")");
}

inline Kernel make_erdelyi_kober_conjugate(double alpha, double sigma, double a, double b) {
  detail::require_alpha(alpha, false, "make_erdelyi_kober_conjugate");
  detail::require_positive_interval(a, b, "make_erdelyi_kober_conjugate");
  if (!(sigma > 0.0)) throw DomainError("make_erdelyi_kober_conjugate: sigma must be positive");
  return detail::erdelyi_kober_power(1.0 - alpha, sigma,
                                     "erdelyi_kober_conjugate(" + std::to_string(alpha) + ")");
}

/// F((x - y)/alpha) on [0, 1] with omega = 1. Diagonal singularity is
/// 1/(d ln^2 d); evaluated from the process-wide Chebyshev table.
inline Kernel make_volterra_kernel(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("make_volterra_kernel: alpha must be positive");
  const VolterraTable* table = &volterra_table();
  const double inv = 1.0 / alpha;
  Kernel k;
  k.name = "volterra(" + std::to_string(alpha) + ")";
  k.fn = [table, alpha, inv](double, double, const Separation& s) {
    if (s.scaled) return alpha * table->scaled(s.log_gap);
    return table->eval(s.gap * inv);
  };
  k.diagonal = quad::EndpointBehavior::inverse_log_square(alpha);
  k.convolution = true;
  return k;
}

/// E1((x - y)/alpha) / alpha on [0, 1] with omega = 1.
inline Kernel make_e1_kernel(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("make_e1_kernel: alpha must be positive");
  const double inv = 1.0 / alpha;
  Kernel k;
  k.name = "e1(" + std::to_string(alpha) + ")";
  k.fn = [inv](double, double, const Separation& s) { return exp_integral_e1(s.gap * inv) * inv; };
  k.diagonal = quad::EndpointBehavior::logarithmic();
  // int_0^X E1 = 1 + X E1(X) - e^-X
  auto marginal = [inv](double d) {
    if (d <= 0.0) return 0.0;
    const double X = d * inv;
    return 1.0 + X * exp_integral_e1(X) - std::exp(-X);
  };
  k.closed_form_fk = [marginal](double y) { return marginal(1.0 - y); };
  k.closed_form_gk = [marginal](double y) { return marginal(y); };
  k.convolution = true;
  return k;
}

/// A kernel together with its conjugate (when one exists) and weight.
struct KernelPair {
  Kernel kernel;
  std::optional<Kernel> conjugate;
  WeightFunction weight;
};

inline KernelPair rl_pair(double alpha, double a = 0.0, double b = 1.0) {
  return {make_rl_kernel(alpha, a, b), make_rl_conjugate(alpha, a, b), WeightFunction::unit(a, b)};
}
inline KernelPair hadamard_pair(double alpha, double a = 1.0, double b = std::numbers::e) {
  return {make_hadamard_kernel(alpha, a, b), make_hadamard_conjugate(alpha, a, b),
          WeightFunction::reciprocal(a, b)};
}
inline KernelPair erdelyi_kober_pair(double alpha, double sigma, double a = 0.5, double b = 1.5) {
  return {make_erdelyi_kober_kernel(alpha, sigma, a, b), make_erdelyi_kober_conjugate(alpha, sigma, a, b),
          WeightFunction::power(sigma, a, b)};
}
inline KernelPair volterra_pair(double alpha) {
  return {make_volterra_kernel(alpha), make_e1_kernel(alpha), WeightFunction::unit(0.0, 1.0)};
}
inline KernelPair e1_pair(double alpha) {
  return {make_e1_kernel(alpha), make_volterra_kernel(alpha), WeightFunction::unit(0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// Composition kernels.

/// delta_{k1,k2}(x, y) = int_y^x k1(x, z) k2(z, y) omega(z) dz.
///
/// `gap` is x - y when the caller knows it more accurately than the
/// difference of the arguments.
inline quad::QuadResult composition_delta_result(const Kernel& k1, const Kernel& k2, const WeightFunction& w,
                                                 double x, double y, double gap, double tol = 1e-12) {
  if (!(gap > 0.0)) throw DomainError("composition_delta: requires x > y");
  auto integrand = [&](const quad::Node& n) {
    const double z = n.t;
    Separation s1{n.to_b, false, 0.0};
    Separation s2{n.from_a, false, 0.0};
    if (n.scaled == quad::ScaledSide::right) {
      s1.scaled = true;
      s1.log_gap = n.log_gap;
    } else if (n.scaled == quad::ScaledSide::left) {
      s2.scaled = true;
      s2.log_gap = n.log_gap;
    }
    return k1.eval(x, z, s1) * k2.eval(z, y, s2) * w(z);
  };
  // Integrate over the gap variable so that both distances stay exact.
  auto shifted = [&](const quad::Node& n) {
    quad::Node m = n;
    m.t = y + n.from_a;
    return integrand(m);
  };
  quad::QuadOptions opt;
  opt.rel_tol = tol;
  return quad::integrate_singular(shifted, 0.0, gap, {k2.diagonal, k1.diagonal}, tol, opt);
}

inline double composition_delta(const Kernel& k1, const Kernel& k2, const WeightFunction& w, double x, double y,
                                double tol = 1e-12) {
  return quad::checked(composition_delta_result(k1, k2, w, x, y, x - y, tol), "composition_delta");
}

struct CompositionKernel {
  Kernel k1;
  Kernel k2;
  WeightFunction weight;
  double tol = 1e-12;

  double eval(double x, double y) const { return composition_delta(k1, k2, weight, x, y, tol); }
  double operator()(double x, double y) const { return eval(x, y); }

  /// The composition as a Kernel record usable by every operator.
  Kernel as_kernel() const {
    Kernel k;
    k.name = "delta[" + k1.name + "," + k2.name + "]";
    auto a = k1;
    auto b = k2;
    auto w = weight;
    const double t = tol;
    k.fn = [a, b, w, t](double x, double y, const Separation& s) {
      return quad::checked(composition_delta_result(a, b, w, x, y, s.gap, t), "composition kernel");
    };
    using K = quad::EndpointKind;
    if (k1.diagonal.kind == K::algebraic && k2.diagonal.kind == K::algebraic) {
      k.diagonal = quad::EndpointBehavior::algebraic(
          std::max(0.0, k1.diagonal.exponent + k2.diagonal.exponent - 1.0));
    } else if (k1.diagonal.is_regular() && k2.diagonal.is_regular()) {
      k.diagonal = quad::EndpointBehavior::regular();
    } else {
      k.diagonal = quad::EndpointBehavior::logarithmic();
    }
    k.convolution = k1.convolution && k2.convolution && w.is_unit;
    return k;
  }
};

// ---------------------------------------------------------------------------
// Membership in the admissible class: F_k and G_k essentially bounded.

struct GridFailure {
  double x = 0.0;
  double y = 0.0;
  std::string message;
};

struct MembershipReport {
  double sup_fk = 0.0;
  double sup_gk = 0.0;
  int grid_size = 0;
  bool passes = false;
  std::vector<double> grid;
  std::vector<double> fk;
  std::vector<double> gk;
  std::vector<GridFailure> failures;
};

namespace detail {

// F_k(y) = int_y^b k(x, y) omega(x) dx.
inline double marginal_f(const Kernel& k, const WeightFunction& w, double y, double tol) {
  const double len = w.b - y;
  auto integrand = [&](const quad::Node& n) {
    const double x = y + n.from_a;
    Separation s{n.from_a, n.scaled == quad::ScaledSide::left, n.log_gap};
    return k.eval(x, y, s) * w(x);
  };
  quad::QuadOptions opt;
  opt.rel_tol = tol;
  return quad::checked(quad::integrate_singular(integrand, 0.0, len, {k.diagonal, {}}, tol, opt), "F_k");
}

// G_k(y) = int_a^y k(y, x) omega(x) dx.
inline double marginal_g(const Kernel& k, const WeightFunction& w, double y, double tol) {
  auto integrand = [&](const quad::Node& n) {
    Separation s{n.to_b, n.scaled == quad::ScaledSide::right, n.log_gap};
    return k.eval(y, n.t, s) * w(n.t);
  };
  quad::QuadOptions opt;
  opt.rel_tol = tol;
  return quad::checked(quad::integrate_singular(integrand, w.a, y, {k.left, k.diagonal}, tol, opt), "G_k");
}

// Values along a sequence approaching an endpoint: bounded if the increments
// shrink geometrically, unbounded if they stay positive and do not shrink.
inline bool looks_unbounded(const std::vector<double>& v) {
  if (v.size() < 4) return false;
  const std::size_t n = v.size();
  for (std::size_t i = n - 3; i < n; ++i) {
    const double d_prev = v[i - 1] - v[i - 2];
    const double d = v[i] - v[i - 1];
    if (!(d > 0.0) || d < 0.9 * d_prev) return false;
  }
  return true;
}

}  // namespace detail

/// Estimates sup F_k over [a, b) and sup G_k over (a, b] on a uniform grid of
/// `grid_size` points plus geometric sequences toward both ends.
inline MembershipReport membership_report(const Kernel& k, const WeightFunction& w, int grid_size = 32,
                                          double tol = 1e-10) {
  if (grid_size < 16) throw DomainError("membership_report: grid_size must be at least 16");
  MembershipReport rep;
  rep.grid_size = grid_size;
  const double a = w.a, b = w.b, len = b - a;
  bool finite = true;
  auto record = [&](double y, bool which_f) -> std::optional<double> {
    try {
      const double v = which_f ? detail::marginal_f(k, w, y, tol) : detail::marginal_g(k, w, y, tol);
      if (!std::isfinite(v)) {
        finite = false;
        return std::nullopt;
      }
      return v;
    } catch (const Error& e) {
      rep.failures.push_back({which_f ? b : y, which_f ? y : a, e.what()});
      finite = false;
      return std::nullopt;
    }
  };
  for (int i = 0; i < grid_size; ++i) {
    const double yf = a + len * i / grid_size;
    const double yg = a + len * (i + 1) / grid_size;
    rep.grid.push_back(yf);
    if (auto v = record(yf, true)) {
      rep.fk.push_back(*v);
      rep.sup_fk = std::max(rep.sup_fk, *v);
    }
    if (auto v = record(yg, false)) {
      rep.gk.push_back(*v);
      rep.sup_gk = std::max(rep.sup_gk, *v);
    }
  }
  // F_k toward b and G_k toward a.
  std::vector<double> tail_f, tail_g;
  for (int j = 4; j <= 24; j += 2) {
    const double h = len * std::ldexp(1.0, -j);
    if (auto v = record(b - h, true)) {
      tail_f.push_back(*v);
      rep.sup_fk = std::max(rep.sup_fk, *v);
    }
    if (auto v = record(a + h, false)) {
      tail_g.push_back(*v);
      rep.sup_gk = std::max(rep.sup_gk, *v);
    }
  }
  if (detail::looks_unbounded(tail_f)) rep.sup_fk = std::numeric_limits<double>::infinity();
  if (detail::looks_unbounded(tail_g)) rep.sup_gk = std::numeric_limits<double>::infinity();
  rep.passes = finite && std::isfinite(rep.sup_fk) && std::isfinite(rep.sup_gk);
  return rep;
}

// ---------------------------------------------------------------------------
// Conjugacy.

struct ConjugacyPoint {
  double x = 0.0;
  double y = 0.0;
  double forward = 0.0;   // delta_{k1,k2}(x, y)
  double backward = 0.0;  // delta_{k2,k1}(x, y)
};

struct ConjugacyReport {
  double max_dev_forward = 0.0;
  double max_dev_backward = 0.0;
  double tolerance = 0.0;
  bool conjugate = false;
  std::vector<ConjugacyPoint> points;
  std::vector<GridFailure> failures;
};

/// Triangular grid x_i = a + (b-a)(i+1)/n, y_j = a + (b-a)j/n, j <= i.
inline std::vector<std::pair<double, double>> triangular_grid(double a, double b, int n = 20) {
  std::vector<std::pair<double, double>> g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      g.emplace_back(a + (b - a) * (i + 1) / n, a + (b - a) * j / n);
    }
  }
  return g;
}

/// Default tolerance: 1e-5 when either kernel has a logarithmic-type diagonal,
/// 1e-7 otherwise.
inline double default_conjugacy_tolerance(const Kernel& k1, const Kernel& k2) {
  return (k1.logarithmic() || k2.logarithmic()) ? 1e-5 : 1e-7;
}

inline ConjugacyReport check_conjugacy(const Kernel& k1, const Kernel& k2, const WeightFunction& w,
                                       const std::vector<std::pair<double, double>>& grid, double tol,
                                       double quad_tol = 1e-12) {
  ConjugacyReport rep;
  rep.tolerance = tol;
  bool ok = true;
  for (const auto& [x, y] : grid) {
    if (!(x > y && y >= w.a && x <= w.b)) {
      throw DomainError("check_conjugacy: grid point outside the triangle");
    }
    ConjugacyPoint p{x, y, NAN, NAN};
    try {
      p.forward = composition_delta(k1, k2, w, x, y, quad_tol);
      p.backward = composition_delta(k2, k1, w, x, y, quad_tol);
      rep.max_dev_forward = std::max(rep.max_dev_forward, std::abs(p.forward - 1.0));
      rep.max_dev_backward = std::max(rep.max_dev_backward, std::abs(p.backward - 1.0));
    } catch (const Error& e) {
      rep.failures.push_back({x, y, e.what()});
      ok = false;
    }
    rep.points.push_back(p);
  }
  rep.conjugate = ok && rep.max_dev_forward <= tol && rep.max_dev_backward <= tol;
  return rep;
}

inline ConjugacyReport check_conjugacy(const Kernel& k1, const Kernel& k2, const WeightFunction& w) {
  return check_conjugacy(k1, k2, w, triangular_grid(w.a, w.b), default_conjugacy_tolerance(k1, k2));
}

/// Sonine form of the conjugacy test for convolution kernels k_i = K_i(x - y)
/// with omega = 1: max over t of |int_0^t K1(t - s) K2(s) ds - 1|.
inline double sonine_residual(const Kernel& k1, const Kernel& k2, const std::vector<double>& ts,
                              double tol = 1e-12) {
  if (!k1.convolution || !k2.convolution) throw DomainError("sonine_residual: convolution kernels required");
  const auto w = WeightFunction::unit(0.0, std::max(1.0, *std::max_element(ts.begin(), ts.end())));
  double worst = 0.0;
  for (double t : ts) worst = std::max(worst, std::abs(composition_delta(k1, k2, w, t, 0.0, tol) - 1.0));
  return worst;
}

/// Checks k > 0 on the interior triangular grid (the only finite check available).
inline bool sample_positivity(const Kernel& k, const WeightFunction& w, int n = 20) {
  for (const auto& [x, y] : triangular_grid(w.a, w.b, n)) {
    const double v = k(x, y);
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace gfc
