#pragma once

// Adaptive Gauss-Kronrod integration of weakly singular integrands and
// Richardson-extrapolated numerical differentiation.
//
// Endpoint singularities are removed by a change of variables chosen from an
// EndpointBehavior:
//   algebraic q          integrand ~ d^{-q}           d = u^{1/(1-q)}
//   logarithmic          integrand ~ ln d             geometric mesh grading
//   inverse_log_square s integrand ~ 1/(d ln^2(d/s))  d = s exp(-1/v)
// where d is the distance to the endpoint. The last kind carries almost all of
// its mass at distances that underflow double precision, so the integrand is
// asked for a *scaled* value there (see Node).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gfc/error.hpp"

namespace gfc::quad {

enum class EndpointKind { regular, algebraic, logarithmic, inverse_log_square };

struct EndpointBehavior {
  EndpointKind kind = EndpointKind::regular;
  double exponent = 0.0;  // algebraic only
  double scale = 1.0;     // inverse_log_square only

  static EndpointBehavior regular() { return {}; }

  static EndpointBehavior algebraic(double q) {
    if (!(q >= 0.0 && q < 1.0)) {
      throw DomainError("algebraic endpoint exponent must lie in [0, 1), got " + std::to_string(q));
    }
    if (q == 0.0) return regular();
    return {EndpointKind::algebraic, q, 1.0};
  }

  static EndpointBehavior logarithmic() { return {EndpointKind::logarithmic, 0.0, 1.0}; }

  static EndpointBehavior inverse_log_square(double scale) {
    if (!(scale > 0.0)) throw DomainError("inverse-log-square scale must be positive");
    return {EndpointKind::inverse_log_square, 0.0, scale};
  }

  bool is_regular() const { return kind == EndpointKind::regular; }

  friend bool operator==(const EndpointBehavior&, const EndpointBehavior&) = default;
};

/// Behavior of a product of two factors that are singular at the same endpoint.
inline EndpointBehavior combine(const EndpointBehavior& p, const EndpointBehavior& q) {
  using K = EndpointKind;
  if (p.is_regular()) return q;
  if (q.is_regular()) return p;
  if (p.kind == K::inverse_log_square || q.kind == K::inverse_log_square) {
    throw DomainError("cannot combine an inverse-log-square endpoint with another singular factor");
  }
  if (p.kind == K::algebraic && q.kind == K::algebraic) {
    return EndpointBehavior::algebraic(p.exponent + q.exponent);
  }
  if (p.kind == K::algebraic) return p;
  if (q.kind == K::algebraic) return q;
  return p;  // log * log: grading still resolves it
}

struct SingularSpec {
  EndpointBehavior left;
  EndpointBehavior right;
};

enum class ScaledSide { none, left, right };

/// Point handed to Node-aware integrands.
///
/// from_a and to_b are the distances to the interval ends, computed from the
/// substitution variable and therefore accurate even when t itself rounds to
/// an endpoint. When scaled != none the integrand must return
///     f(t) * d * ln(d / s)^2
/// where d is the distance to that endpoint and s its scale; log_gap holds
/// ln(d / s) exactly (d itself may have underflowed to zero).
struct Node {
  double t = 0.0;
  double from_a = 0.0;
  double to_b = 0.0;
  ScaledSide scaled = ScaledSide::none;
  double log_gap = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  /// Relative tolerance; negative means "same as the absolute tolerance".
  double rel_tol = -1.0;
  int max_intervals = 4000;
  /// Interior points where the integrand has kinks or jumps.
  std::vector<double> breakpoints;
  /// Grading ratio and depth cap for logarithmic endpoints.
  double log_ratio = 0.15;
  int max_log_depth = 40;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208685644351, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod abscissae xgk[1], xgk[3], ...
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

enum class Anchor { left, right };
enum class MapKind { linear, power, inverse_log };

// A segment maps a parameter s to a distance d >= 0 from its anchor endpoint.
struct Segment {
  Anchor anchor = Anchor::left;
  MapKind map = MapKind::linear;
  double p = 1.0;      // power map exponent
  double scale = 1.0;  // inverse-log scale
};

struct Panel {
  int segment = 0;
  double s0 = 0.0;
  double s1 = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool splittable = true;
};

template <class F>
constexpr bool kNodeAware = std::is_invocable_r_v<double, F&, const Node&>;

template <class F>
class Integrator {
 public:
  Integrator(F& f, double a, double b) : f_(f), a_(a), b_(b), length_(b - a) {}

  double eval(const Segment& seg, double s, long& count) const {
    double d = 0.0;
    double jac = 1.0;
    Node node;
    switch (seg.map) {
      case MapKind::linear:
        d = s;
        break;
      case MapKind::power:
        d = std::pow(s, seg.p);
        jac = seg.p * std::pow(s, seg.p - 1.0);
        break;
      case MapKind::inverse_log:
        node.log_gap = -1.0 / s;
        d = seg.scale * std::exp(node.log_gap);
        node.scaled = seg.anchor == Anchor::left ? ScaledSide::left : ScaledSide::right;
        break;
    }
    if (seg.anchor == Anchor::left) {
      node.t = a_ + d;
      node.from_a = d;
      node.to_b = length_ - d;
    } else {
      node.t = b_ - d;
      node.to_b = d;
      node.from_a = length_ - d;
    }
    ++count;
    double v;
    if constexpr (kNodeAware<F>) {
      v = f_(node);
    } else {
      if (node.scaled != ScaledSide::none) {
        throw DomainError("inverse-log-square endpoints need an integrand that accepts gfc::quad::Node");
      }
      // A plain integrand only sees the rounded abscissa t, whose true
      // distance to the anchor is dr rather than d. Keep t off the endpoint
      // and, at an algebraic end, rescale by the declared behavior d^-q.
      double t = node.t;
      const bool right = seg.anchor == Anchor::right;
      if (d > 0.0 && right && t >= b_) t = std::nextafter(b_, a_);
      if (d > 0.0 && !right && t <= a_) t = std::nextafter(a_, b_);
      v = f_(t);
      if (seg.map == MapKind::power && d > 0.0) {
        const double dr = right ? b_ - t : t - a_;
        if (dr != d) v *= std::pow(dr / d, 1.0 - 1.0 / seg.p);
      }
    }
    v *= jac;
    if (!std::isfinite(v)) {
      throw QuadratureError("non-finite integrand value at t = " + std::to_string(node.t), v, INFINITY);
    }
    return v;
  }

  void apply_rule(const Segment& seg, Panel& panel, long& count) const {
    const double center = 0.5 * (panel.s0 + panel.s1);
    const double half = 0.5 * (panel.s1 - panel.s0);
    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};
    const double fc = eval(seg, center, count);
    double resg = 0.0;
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
      const double dx = half * kXgk[j];
      fv1[j] = eval(seg, center - dx, count);
      fv2[j] = eval(seg, center + dx, count);
      resk += kWgk[j] * (fv1[j] + fv2[j]);
      resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
      if (j % 2 == 1) resg += kWg[j / 2] * (fv1[j] + fv2[j]);
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
      resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double abs_half = std::abs(half);
    resk *= half;
    resg *= half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    // Splitting a panel whose estimate is already at the rounding floor gains nothing.
    const double floor_err = 50.0 * eps * resabs;
    panel.splittable = err > floor_err;
    err = std::max(floor_err, err);
    panel.value = resk;
    panel.error = err;
    const double width = panel.s1 - panel.s0;
    if (width <= 1e3 * eps * std::max(std::abs(panel.s0), std::abs(panel.s1)) || width < 1e-300) {
      panel.splittable = false;
    }
  }

 private:
  F& f_;
  double a_;
  double b_;
  double length_;
};

inline void add_endpoint_panels(std::vector<Segment>& segs, std::vector<Panel>& panels,
                                Anchor anchor, const EndpointBehavior& beh, double length,
                                double tol, const QuadOptions& opt) {
  using K = EndpointKind;
  switch (beh.kind) {
    case K::regular: {
      segs.push_back({anchor, MapKind::linear, 1.0, 1.0});
      panels.push_back({static_cast<int>(segs.size()) - 1, 0.0, length});
      break;
    }
    case K::algebraic: {
      const double p = 1.0 / (1.0 - beh.exponent);
      segs.push_back({anchor, MapKind::power, p, 1.0});
      panels.push_back({static_cast<int>(segs.size()) - 1, 0.0, std::pow(length, 1.0 / p)});
      break;
    }
    case K::logarithmic: {
      segs.push_back({anchor, MapKind::linear, 1.0, 1.0});
      const int seg = static_cast<int>(segs.size()) - 1;
      const double rho = opt.log_ratio;
      int depth = static_cast<int>(std::ceil(std::log(std::max(tol, 1e-300)) / std::log(rho)));
      depth = std::clamp(depth, 1, opt.max_log_depth);
      double hi = length;
      for (int j = 0; j < depth; ++j) {
        const double lo = hi * rho;
        panels.push_back({seg, lo, hi});
        hi = lo;
      }
      panels.push_back({seg, 0.0, hi});
      break;
    }
    case K::inverse_log_square: {
      const double dc = std::min(length, beh.scale * std::exp(-1.0));
      const double vc = -1.0 / std::log(dc / beh.scale);
      segs.push_back({anchor, MapKind::inverse_log, 1.0, beh.scale});
      const int seg = static_cast<int>(segs.size()) - 1;
      double hi = vc;
      for (int j = 0; j < 4; ++j) {
        panels.push_back({seg, 0.5 * hi, hi});
        hi *= 0.5;
      }
      panels.push_back({seg, 0.0, hi});
      if (dc < length) {
        segs.push_back({anchor, MapKind::linear, 1.0, 1.0});
        panels.push_back({static_cast<int>(segs.size()) - 1, dc, length});
      }
      break;
    }
  }
}

}  // namespace detail

/// Integrates f over [a, b] honoring the endpoint behaviors in `spec`.
///
/// `f` is either callable as double(double) or as double(const Node&). The
/// estimate targets max(tol, rel_tol * |I|). On budget exhaustion the best
/// estimate is returned with converged = false.
template <class F>
QuadResult integrate_singular(F&& f, double a, double b, const SingularSpec& spec, double tol,
                              const QuadOptions& opt = {}) {
  using namespace detail;
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integrate_singular requires a < b");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double rel_tol = opt.rel_tol < 0.0 ? tol : opt.rel_tol;

  // Cuts closer than this to an end would leave a sliver panel.
  const double sliver = 1e-10 * (b - a);
  std::vector<double> cuts;
  for (double bp : opt.breakpoints) {
    if (bp > a + sliver && bp < b - sliver) cuts.push_back(bp);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty() && !spec.left.is_regular() && !spec.right.is_regular()) {
    cuts.push_back(a + 0.5 * (b - a));
  }

  std::vector<Segment> segs;
  std::vector<Panel> panels;
  const double length = b - a;
  // Per-endpoint option tolerance drives logarithmic grading depth.
  const double grade_tol = std::min(tol, 1e-3);
  if (cuts.empty()) {
    if (!spec.right.is_regular()) {
      add_endpoint_panels(segs, panels, Anchor::right, spec.right, length, grade_tol, opt);
    } else {
      add_endpoint_panels(segs, panels, Anchor::left, spec.left, length, grade_tol, opt);
    }
  } else {
    add_endpoint_panels(segs, panels, Anchor::left, spec.left, cuts.front() - a, grade_tol, opt);
    segs.push_back({Anchor::left, MapKind::linear, 1.0, 1.0});
    const int interior = static_cast<int>(segs.size()) - 1;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      panels.push_back({interior, cuts[i] - a, cuts[i + 1] - a});
    }
    add_endpoint_panels(segs, panels, Anchor::right, spec.right, b - cuts.back(), grade_tol, opt);
  }

  Integrator<std::remove_reference_t<F>> integ(f, a, b);
  QuadResult out;
  for (auto& p : panels) integ.apply_rule(segs[p.segment], p, out.evaluations);

  auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (error > std::max(tol, rel_tol * std::abs(value))) {
    std::size_t worst = panels.size();
    double worst_err = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (panels[i].splittable && panels[i].error > worst_err) {
        worst_err = panels[i].error;
        worst = i;
      }
    }
    if (worst == panels.size()) break;  // roundoff floor everywhere
    if (static_cast<int>(panels.size()) >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Panel left = panels[worst];
    Panel right = panels[worst];
    const double mid = 0.5 * (left.s0 + left.s1);
    left.s1 = mid;
    right.s0 = mid;
    integ.apply_rule(segs[left.segment], left, out.evaluations);
    integ.apply_rule(segs[right.segment], right, out.evaluations);
    panels[worst] = left;
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, right);
    std::tie(value, error) = totals();
  }
  out.value = value;
  out.error_estimate = error;
  return out;
}

/// Throws QuadratureError when the result did not converge.
inline double checked(const QuadResult& r, const char* what) {
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": quadrature budget exhausted", r.value, r.error_estimate);
  }
  return r.value;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, double tol, const QuadOptions& opt = {}) {
  return integrate_singular(std::forward<F>(f), a, b, SingularSpec{}, tol, opt);
}

struct DerivativeResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double step = 0.0;
  bool converged = true;
  /// Samples used by the stencil, ordered by abscissa; used by callers that
  /// need a bounded-variation check of g near x.
  std::vector<std::pair<double, double>> samples;
};

/// Central differences with two Richardson levels on steps h0, h0/2, h0/4,
/// h0 = tol^(1/3) max(1, |x|). Near a finite domain end the stencil turns
/// one-sided. The step never goes below 1e-7 (hi - lo).
template <class G>
DerivativeResult derivative(G&& g, double x, double tol = 1e-6,
                            double lo = -std::numeric_limits<double>::infinity(),
                            double hi = std::numeric_limits<double>::infinity()) {
  if (!(tol > 0.0)) throw DomainError("derivative tolerance must be positive");
  if (!(x >= lo && x <= hi)) throw DomainError("derivative abscissa outside the domain");
  const double nominal = std::cbrt(tol) * std::max(1.0, std::abs(x));
  const double floor_step = std::isfinite(hi - lo) ? 1e-7 * (hi - lo) : 0.0;
  const double room_left = x - lo;
  const double room_right = hi - x;

  DerivativeResult out;
  auto sample = [&](double t) {
    const double v = g(t);
    out.samples.emplace_back(t, v);
    return v;
  };

  double h0 = std::min({nominal, room_left, room_right});
  if (h0 >= 0.25 * nominal && h0 / 4.0 >= floor_step) {
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
      const double h = h0 / static_cast<double>(1 << i);
      d[i] = (sample(x + h) - sample(x - h)) / (2.0 * h);
    }
    const double r1a = (4.0 * d[1] - d[0]) / 3.0;
    const double r1b = (4.0 * d[2] - d[1]) / 3.0;
    out.value = (16.0 * r1b - r1a) / 15.0;
    out.error_estimate = std::abs(out.value - r1b);
  } else {
    const bool forward = room_right >= room_left;
    const double room = forward ? room_right : room_left;
    h0 = std::min(nominal, 0.5 * room);
    if (h0 / 4.0 < floor_step) {
      throw DomainError("derivative stencil does not fit inside the domain");
    }
    const double sgn = forward ? 1.0 : -1.0;
    const double g0 = sample(x);
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
      const double h = h0 / static_cast<double>(1 << i);
      d[i] = sgn * (-3.0 * g0 + 4.0 * sample(x + sgn * h) - sample(x + sgn * 2.0 * h)) / (2.0 * h);
    }
    const double r1a = (4.0 * d[1] - d[0]) / 3.0;
    const double r1b = (4.0 * d[2] - d[1]) / 3.0;
    out.value = (8.0 * r1b - r1a) / 7.0;
    out.error_estimate = std::abs(out.value - r1b);
  }
  std::sort(out.samples.begin(), out.samples.end());
  out.step = h0;
  out.converged = std::isfinite(out.value) &&
                  out.error_estimate <= std::sqrt(tol) * std::max(1.0, std::abs(out.value));
  return out;
}

/// Throwing form of derivative().
template <class G>
double differentiate(G&& g, double x, double tol = 1e-6,
                     double lo = -std::numeric_limits<double>::infinity(),
                     double hi = std::numeric_limits<double>::infinity()) {
  const auto r = derivative(std::forward<G>(g), x, tol, lo, hi);
  if (!r.converged) {
    throw DerivativeError("extrapolation table did not converge at x = " + std::to_string(x), r.value,
                          r.error_estimate);
  }
  return r.value;
}

}  // namespace gfc::quad
