#pragma once

// Picard iteration for  D_0^{k'} u = f(t, u),  (I_0^{k'} u)(0) = 0  on [0, 1],
// through the equivalent fixed-point form  u = I_0^k f(., u).

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/grid_function.hpp"
#include "gfc/operators.hpp"

namespace gfc {

struct BvpProblem {
  /// Pair context: kernel = k, conjugate = k'.
  OperatorContext ctx;
  std::function<double(double t, double u)> rhs;
  double lipschitz = 0.0;
  std::vector<double> mesh;

  static std::vector<double> default_mesh(double a, double b) { return GridFunction::uniform_mesh(a, b, 257); }
};

struct BvpSolution {
  GridFunction u;
  int iterations = 0;
  std::vector<double> residual_history;
  double contraction_constant = 0.0;
  double fixed_point_defect = 0.0;
};

class ContractionViolated : public Error {
 public:
  explicit ContractionViolated(double constant)
      : Error("contraction constant " + std::to_string(constant) + " is not below 1; the fixed-point theorem does not apply"),
        constant_(constant) {}
  double constant() const { return constant_; }

 private:
  double constant_;
};

class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(BvpSolution best)
      : Error("Picard iteration did not reach the tolerance within the iteration budget"), best_(std::move(best)) {}
  const BvpSolution& best() const { return best_; }

 private:
  BvpSolution best_;
};

namespace detail {

inline const std::vector<double>& problem_mesh(const BvpProblem& p, std::vector<double>& storage) {
  if (!p.mesh.empty()) return p.mesh;
  storage = BvpProblem::default_mesh(p.ctx.a(), p.ctx.b());
  return storage;
}

inline void validate_problem(const BvpProblem& p) {
  if (!p.rhs) throw ConfigError("BVP: right-hand side missing");
  if (!(p.lipschitz >= 0.0)) throw ConfigError("BVP: Lipschitz constant must be non-negative");
}

// T u = I_0^k f(., u) on the mesh, with u linearly interpolated.
inline std::vector<double> picard_map(const BvpProblem& p, const GridFunction& u, const std::vector<double>& mesh) {
  RealFunction g;
  g.fn = [&](double t) {
    const double v = p.rhs(t, u(t));
    if (!std::isfinite(v)) throw DomainError("BVP: right-hand side is not finite at t = " + std::to_string(t));
    return v;
  };
  g.breakpoints = mesh;
  g.name = "rhs";
  std::vector<double> out(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) out[i] = left_integral(p.ctx, g, mesh[i]);
  return out;
}

inline double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace detail

/// c_f * max over the mesh of (I_0^k 1)(x).
inline double contraction_constant(const BvpProblem& p) {
  std::vector<double> storage;
  const auto& mesh = detail::problem_mesh(p, storage);
  const RealFunction one = constant_function(1.0);
  double sup = 0.0;
  for (double x : mesh) sup = std::max(sup, left_integral(p.ctx, one, x));
  return p.lipschitz * sup;
}

/// Iterates u_{n+1} = I_0^k f(., u_n) from the constant `initial` until the
/// sup-norm of successive differences is at most tol.
inline BvpSolution picard_solve(const BvpProblem& p, double tol = 1e-8, int max_iter = 200, double initial = 0.0) {
  detail::validate_problem(p);
  if (!(tol > 0.0)) throw ConfigError("BVP: tolerance must be positive");
  std::vector<double> storage;
  const auto& mesh = detail::problem_mesh(p, storage);
  BvpSolution sol;
  sol.contraction_constant = contraction_constant(p);
  if (sol.contraction_constant >= 1.0) throw ContractionViolated(sol.contraction_constant);

  std::vector<double> cur(mesh.size(), initial);
  bool done = false;
  while (sol.iterations < max_iter) {
    std::vector<double> next = detail::picard_map(p, GridFunction(mesh, cur), mesh);
    const double r = detail::sup_diff(next, cur);
    sol.residual_history.push_back(r);
    cur = std::move(next);
    ++sol.iterations;
    if (r <= tol) {
      done = true;
      break;
    }
  }
  sol.u = GridFunction(mesh, cur);
  sol.fixed_point_defect = detail::sup_diff(detail::picard_map(p, sol.u, mesh), cur);
  if (!done) throw MaxIterExceeded(sol);
  return sol;
}

struct BvpVerification {
  /// max over the probed mesh nodes of |D_0^{k'} U - f(., U)|, where
  /// U = I_0^k f(., u_h) is the solution as a function.
  double equation_residual = 0.0;
  /// Extrapolated (I_0^{k'} u)(0).
  double boundary_value = 0.0;
};

/// Round trip of a computed solution through the derivative operator, probed
/// at every `stride`-th interior mesh node.
///
/// With U = I_0^k g and g = f(., u_h), I_0^{k'} U is evaluated as the single
/// integral of g against the numerically composed kernel delta_{k',k}, which
/// avoids nesting one quadrature inside another. g has kinks at the mesh
/// nodes, so the difference stencil is kept inside the cell to the right of
/// each probe.
inline BvpVerification verify_solution(const BvpProblem& p, const BvpSolution& s, int stride = 32) {
  if (stride < 1) throw ConfigError("verify_solution: stride must be positive");
  const auto dctx = p.ctx.derivative_context();
  const double len = p.ctx.b() - p.ctx.a();
  const double margin = kDerivativeMargin * len;
  RealFunction g;
  const GridFunction& u = s.u;
  g.fn = [&](double t) { return p.rhs(t, u(t)); };
  g.breakpoints = u.mesh();
  const CompositionKernel composed{dctx.kernel, p.ctx.kernel, p.ctx.weight, 1e-13};
  const OperatorContext cctx = p.ctx.with_kernel(composed.as_kernel());
  auto IU = [&](double t) { return left_integral(cctx, g, t); };
  BvpVerification out;
  const auto& mesh = u.mesh();
  for (std::size_t i = static_cast<std::size_t>(stride); i + 1 < mesh.size(); i += static_cast<std::size_t>(stride)) {
    const double t = mesh[i];
    if (t < p.ctx.a() + margin || t > p.ctx.b() - margin) continue;
    const double d = quad::differentiate(IU, t, dctx.deriv_tol, t, mesh[i + 1]) / dctx.weight(t);
    const double U = left_integral(p.ctx, g, t);
    out.equation_residual = std::max(out.equation_residual, std::abs(d - p.rhs(t, U)));
  }
  const RealFunction uh = from_grid(u, "u");
  out.boundary_value = boundary_limit([&](double t) { return left_integral(dctx, uh, t); }, p.ctx.a(), 0.1 * len);
  return out;
}

/// Largest jump of I_0^k g between neighboring nodes of uniform meshes
/// with `sizes` points. Shrinking jumps are evidence, not proof, that
/// I_0^k maps the continuous probe g to a continuous function.
inline std::vector<double> continuity_probe(const OperatorContext& ctx, const RealFunction& g,
                                            const std::vector<int>& sizes) {
  std::vector<double> jumps;
  for (int n : sizes) {
    const auto mesh = GridFunction::uniform_mesh(ctx.a(), ctx.b(), n);
    double prev = left_integral(ctx, g, mesh.front());
    double m = 0.0;
    for (std::size_t i = 1; i < mesh.size(); ++i) {
      const double v = left_integral(ctx, g, mesh[i]);
      m = std::max(m, std::abs(v - prev));
      prev = v;
    }
    jumps.push_back(m);
  }
  return jumps;
}

/// Advisory estimate of sup |df/du| over a box, from difference quotients.
inline double estimate_lipschitz(const std::function<double(double, double)>& rhs, double t0, double t1, double u0,
                                 double u1, int n = 32) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    for (int j = 0; j < n; ++j) {
      const double ua = u0 + (u1 - u0) * j / n;
      const double ub = u0 + (u1 - u0) * (j + 1) / n;
      best = std::max(best, std::abs(rhs(t, ub) - rhs(t, ua)) / (ub - ua));
    }
  }
  return best;
}

}  // namespace gfc
