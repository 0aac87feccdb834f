#pragma once

// Scalar special functions: Gamma and relatives, the exponential integral E1,
// the incomplete gamma function, and the Volterra-type function
//     F(lam) = exp(-lam) * int_0^inf lam^(t-1) / Gamma(t) dt
// which is the convolution partner of E1 (E1 * F == 1).

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

struct SpecFunConfig {
  double series_tolerance = 1e-14;
  int max_terms = 500;
  /// Largest admissible truncation point of improper t-integrals.
  double tail_cutoff = 1e4;

  void validate() const {
    if (!(series_tolerance > 0.0 && series_tolerance <= 1e-3)) {
      throw ConfigError("series_tolerance must lie in (0, 1e-3]");
    }
    if (max_terms < 50) throw ConfigError("max_terms must be at least 50");
    if (!(tail_cutoff > 0.0)) throw ConfigError("tail_cutoff must be positive");
  }
};

namespace detail {

inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series for Gamma(z + 1), z >= -0.5.
inline double lanczos_sum(double z) {
  double s = kLanczos[0];
  for (int i = 1; i < 9; ++i) s += kLanczos[i] / (z + i);
  return s;
}

}  // namespace detail

inline double gamma_fn(double x) {
  using std::numbers::pi;
  if (x < 0.5) {
    if (x == std::floor(x)) throw DomainError("gamma has a pole at non-positive integers");
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, 0.5 * (z + 0.5)) * std::exp(-t) *
         std::pow(t, 0.5 * (z + 0.5)) * detail::lanczos_sum(z);
}

/// ln |Gamma(x)|.
inline double log_gamma(double x) {
  using std::numbers::pi;
  if (x < 0.5) {
    if (x == std::floor(x)) throw DomainError("log_gamma has a pole at non-positive integers");
    return std::log(pi / std::abs(std::sin(pi * x))) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(z));
}

inline double digamma(double x) {
  using std::numbers::pi;
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("digamma has a pole at non-positive integers");
  if (x < 0.5) return digamma(1.0 - x) - pi / std::tan(pi * x);
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
  return acc + std::log(x) - 0.5 / x - series;
}

inline double trigamma(double x) {
  if (!(x > 0.0)) throw DomainError("trigamma implemented for positive arguments only");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series = 1.0 / x + 0.5 * r +
                        (r / x) * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30))));
  return acc + series;
}

inline double beta(double p, double q) {
  return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

/// E1(x) = int_x^inf exp(-t)/t dt. Power series up to x = 1, continued
/// fraction beyond. Underflows to zero past x ~ 740.
inline double exp_integral_e1(double x, const SpecFunConfig& cfg = {}) {
  if (!(x > 0.0)) throw DomainError("E1 requires x > 0");
  const double eps = cfg.series_tolerance;
  if (x <= 1.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= cfg.max_terms; ++n) {
      term *= -x / n;
      const double add = term / n;
      sum += add;
      if (std::abs(add) < 0.1 * eps * std::abs(sum)) {
        return -std::numbers::egamma - std::log(x) - sum;
      }
    }
    throw AccuracyError("E1 series did not converge", -std::numbers::egamma - std::log(x) - sum, INFINITY);
  }
  if (x > 745.0) return 0.0;
  // Modified Lentz evaluation of the continued fraction for exp(x) E1(x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= cfg.max_terms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 0.1 * eps) return h * std::exp(-x);
  }
  throw AccuracyError("E1 continued fraction did not converge", h * std::exp(-x), INFINITY);
}

namespace detail {

// ln of the series part of gamma(s, x): returns ln(sum) with
// gamma(s,x) = x^s e^-x sum.
inline double incgamma_series(double s, double x, const SpecFunConfig& cfg) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int n = 1; n <= cfg.max_terms; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < 0.1 * cfg.series_tolerance * std::abs(sum)) return std::log(sum);
  }
  throw AccuracyError("incomplete gamma series did not converge", sum, INFINITY);
}

// ln of the continued fraction part of Gamma(s, x) = x^s e^-x cf.
inline double incgamma_cf(double s, double x, const SpecFunConfig& cfg) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= cfg.max_terms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 0.1 * cfg.series_tolerance) return std::log(h);
  }
  throw AccuracyError("incomplete gamma continued fraction did not converge", h, INFINITY);
}

inline void check_incgamma_args(double s, double x) {
  if (!(s > 0.0)) throw DomainError("incomplete gamma requires s > 0");
  if (!(x > 0.0)) throw DomainError("incomplete gamma requires x > 0");
}

}  // namespace detail

/// P(s, x) = gamma(s, x) / Gamma(s).
inline double regularized_p(double s, double x, const SpecFunConfig& cfg = {}) {
  detail::check_incgamma_args(s, x);
  const double prefix = s * std::log(x) - x - log_gamma(s);
  if (x < s + 1.0) return std::exp(prefix + detail::incgamma_series(s, x, cfg));
  return -std::expm1(prefix + detail::incgamma_cf(s, x, cfg));
}

/// Q(s, x) = 1 - P(s, x), accurate in the upper tail.
inline double regularized_q(double s, double x, const SpecFunConfig& cfg = {}) {
  detail::check_incgamma_args(s, x);
  const double prefix = s * std::log(x) - x - log_gamma(s);
  if (x < s + 1.0) return -std::expm1(prefix + detail::incgamma_series(s, x, cfg));
  return std::exp(prefix + detail::incgamma_cf(s, x, cfg));
}

inline double lower_incomplete_gamma(double s, double x, const SpecFunConfig& cfg = {}) {
  detail::check_incgamma_args(s, x);
  if (x < s + 1.0) return std::exp(s * std::log(x) - x + detail::incgamma_series(s, x, cfg));
  return gamma_fn(s) * regularized_p(s, x, cfg);
}

// ---------------------------------------------------------------------------
// Volterra-type function F.
//
// Near lam = 0, F(lam) ~ 1/(lam ln^2 lam). The natural bounded quantity there
// is the scaled value F(lam) * lam * ln^2(lam), which is what the kernels and
// the quadrature engine exchange when the gap underflows.

namespace detail {

// Scaled value from the substitution t = s / |L| of the t-integral:
//   F lam L^2 = exp(-lam) int_0^inf s exp(-s) / Gamma(1 + s/|L|) ds,  L <= -1.
inline double volterra_scaled_small(double L, const SpecFunConfig& cfg) {
  const double inv = -1.0 / L;
  const double lam = std::exp(L);
  auto g = [inv](double s) { return s * std::exp(-s - log_gamma(1.0 + s * inv)); };
  // 1/Gamma(1+u) <= 1.13 for u >= 0, so the tail past T is at most 1.13 (T+1) e^-T.
  double T = 20.0;
  while (1.13 * (T + 1.0) * std::exp(-T) > 0.1 * cfg.series_tolerance) T += 5.0;
  quad::QuadOptions opt;
  opt.rel_tol = cfg.series_tolerance;
  opt.breakpoints = {1.0, 3.0, 8.0};
  const auto r = quad::integrate(g, 0.0, T, 1e-300, opt);
  if (!r.converged) throw AccuracyError("volterra_f: s-integral did not converge", r.value, r.error_estimate);
  return std::exp(-lam) * r.value;
}

// Direct t-integral for lam > 1/e, using 1/Gamma(t) = t/Gamma(1+t) so the
// integrand is finite down to t = 0:
//   F(lam) = int_0^inf exp(ln t + (t-1) L - lnGamma(1+t) - lam) dt.
inline double volterra_direct_large(double lam, const SpecFunConfig& cfg) {
  const double L = std::log(lam);
  auto h = [&](double t) { return std::log(t) + (t - 1.0) * L - log_gamma(1.0 + t) - lam; };
  auto dh = [&](double t) { return 1.0 / t + L - digamma(1.0 + t); };
  // dh is strictly decreasing; bracket and bisect its root.
  double lo = 1e-8, hi = std::max(2.0, 2.0 * lam + 10.0);
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dh(mid) > 0.0 ? lo : hi) = mid;
  }
  const double peak = 0.5 * (lo + hi);
  const double width = 1.0 / std::sqrt(1.0 / (peak * peak) + trigamma(1.0 + peak));
  const double hpeak = h(peak);
  // Concavity: past T the integrand is below exp(h(T) + h'(T)(t - T)).
  double T = peak + 8.0 * width;
  auto tail = [&](double t) { return std::exp(h(t) - hpeak) / std::abs(dh(t)); };
  while (tail(T) > 0.01 * cfg.series_tolerance) {
    T += 2.0 * width;
    if (T > cfg.tail_cutoff) {
      throw AccuracyError("volterra_f: tail bound not reached within tail_cutoff", NAN, INFINITY);
    }
  }
  quad::QuadOptions opt;
  opt.rel_tol = cfg.series_tolerance;
  for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
    const double bp = peak + k * width;
    if (bp > 0.0 && bp < T) opt.breakpoints.push_back(bp);
  }
  auto g = [&](double t) { return t > 0.0 ? std::exp(h(t)) : 0.0; };
  const auto r = quad::integrate(g, 0.0, T, 1e-300, opt);
  if (!r.converged) throw AccuracyError("volterra_f: t-integral did not converge", r.value, r.error_estimate);
  return r.value;
}

}  // namespace detail

/// F(lam) * lam * ln^2(lam) as a function of L = ln(lam). Tends to 1 as
/// L -> -inf; defined for every finite L.
inline double volterra_f_scaled_log(double L, const SpecFunConfig& cfg = {}) {
  if (std::isnan(L)) throw DomainError("volterra_f_scaled_log: NaN argument");
  if (L == -std::numeric_limits<double>::infinity()) return 1.0;
  if (L <= -1.0) return detail::volterra_scaled_small(L, cfg);
  const double lam = std::exp(L);
  return detail::volterra_direct_large(lam, cfg) * lam * L * L;
}

/// F(lam) by direct quadrature. Costs a few hundred log-Gamma evaluations;
/// kernels use the tabulated VolterraTable instead.
inline double volterra_f(double lam, const SpecFunConfig& cfg = {}) {
  if (!(lam > 0.0)) throw DomainError("volterra_f requires lam > 0");
  const double L = std::log(lam);
  if (L <= -1.0) return detail::volterra_scaled_small(L, cfg) / (lam * L * L);
  return detail::volterra_direct_large(lam, cfg);
}

/// Piecewise Chebyshev interpolant of F, built once from volterra_f.
///
/// For lam <= 1/e the scaled value is tabulated in v = -1/ln(lam) on [0, 1];
/// it is smooth there, including v -> 0. For 1/e <= lam <= 64 F itself is
/// tabulated. Past 64, F equals 1 to far below double precision.
class VolterraTable {
 public:
  static constexpr int kDegree = 24;
  static constexpr double kLargeCut = 64.0;

  VolterraTable() {
    SpecFunConfig cfg;
    cfg.series_tolerance = 1e-15;
    const std::vector<double> v_edges = {0.0, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
    for (std::size_t i = 0; i + 1 < v_edges.size(); ++i) {
      small_.push_back(fit(v_edges[i], v_edges[i + 1], [&](double v) {
        return v == 0.0 ? 1.0 : detail::volterra_scaled_small(-1.0 / v, cfg);
      }));
    }
    const std::vector<double> lam_edges = {std::exp(-1.0), 0.7, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0,
                                           8.0, 12.0, 16.0, 24.0, 32.0, 48.0, kLargeCut};
    for (std::size_t i = 0; i + 1 < lam_edges.size(); ++i) {
      large_.push_back(fit(lam_edges[i], lam_edges[i + 1],
                           [&](double lam) { return detail::volterra_direct_large(lam, cfg); }));
    }
  }

  /// F(lam * lam ln^2 lam) given L = ln(lam).
  double scaled(double L) const {
    if (L <= -1.0) return lookup(small_, -1.0 / L);
    const double lam = std::exp(L);
    return eval_large(lam) * lam * L * L;
  }

  double eval(double lam) const {
    if (!(lam > 0.0)) throw DomainError("volterra_f requires lam > 0");
    const double L = std::log(lam);
    if (L <= -1.0) return lookup(small_, -1.0 / L) / (lam * L * L);
    return eval_large(lam);
  }

 private:
  struct Piece {
    double lo, hi;
    std::array<double, kDegree + 1> c;
  };

  template <class G>
  static Piece fit(double lo, double hi, G&& g) {
    constexpr int n = kDegree + 1;
    std::array<double, n> fv{};
    for (int j = 0; j < n; ++j) {
      const double x = std::cos(std::numbers::pi * (j + 0.5) / n);
      fv[j] = g(0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
    }
    Piece p{lo, hi, {}};
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += fv[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
      p.c[k] = 2.0 * s / n;
    }
    p.c[0] *= 0.5;
    return p;
  }

  static double clenshaw(const Piece& p, double x) {
    const double u = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
    double b1 = 0.0, b2 = 0.0;
    for (int k = kDegree; k >= 1; --k) {
      const double b0 = 2.0 * u * b1 - b2 + p.c[k];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + p.c[0];
  }

  static double lookup(const std::vector<Piece>& pieces, double x) {
    for (const auto& p : pieces) {
      if (x <= p.hi) return clenshaw(p, x);
    }
    return clenshaw(pieces.back(), x);
  }

  double eval_large(double lam) const { return lam >= kLargeCut ? 1.0 : lookup(large_, lam); }

  std::vector<Piece> small_;
  std::vector<Piece> large_;
};

/// Process-wide table, built on first use (thread-safe static init).
inline const VolterraTable& volterra_table() {
  static const VolterraTable table;
  return table;
}

/// int_0^inf exp(-lam t) f(t) dt, truncated where exp(-lam t) drops below
/// tol * 1e-3 (f is assumed to grow at most polynomially). `at_zero` tells the
/// engine how f behaves at t = 0; node-aware integrands are forwarded.
template <class Fn>
double laplace_numeric(Fn&& f, double lam, const quad::EndpointBehavior& at_zero = {},
                       double tol = 1e-10) {
  if (!(lam > 0.0)) throw DomainError("laplace_numeric requires lam > 0");
  const double T = (-std::log(1e-3 * tol) + 5.0 * std::log1p(1.0 / lam)) / lam + 1.0;
  auto integrand = [&](const quad::Node& n) {
    double ft;
    if constexpr (quad::detail::kNodeAware<Fn>) {
      ft = f(n);
    } else {
      ft = f(n.t);
    }
    return std::exp(-lam * n.t) * ft;
  };
  const double split = std::min(1.0, 0.5 * T);
  const auto head = quad::integrate_singular(integrand, 0.0, split, {at_zero, {}}, tol);
  // Distances handed to f are measured from t = 0, not from the split.
  auto body_integrand = [&](const quad::Node& n) {
    quad::Node m;
    m.t = n.t;
    m.from_a = n.t;
    m.to_b = std::numeric_limits<double>::infinity();
    return integrand(m);
  };
  quad::QuadOptions opt;
  for (double bp = 2.0 * split; bp < T; bp *= 2.0) opt.breakpoints.push_back(bp);
  const auto body = quad::integrate(body_integrand, split, T, tol, opt);
  if (!head.converged || !body.converged) {
    throw AccuracyError("laplace_numeric: quadrature budget exhausted", head.value + body.value,
                        head.error_estimate + body.error_estimate);
  }
  return head.value + body.value;
}

}  // namespace gfc
