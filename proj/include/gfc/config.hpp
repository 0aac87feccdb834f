#pragma once

// JSON-facing configuration: kernel families, BVP right-hand sides, and the
// versioned tolerance table echoed by every CLI report.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfc/bvp.hpp"
#include "gfc/error.hpp"
#include "gfc/kernels.hpp"
#include "gfc/operators.hpp"

namespace gfc::config {

using json = nlohmann::json;

struct KernelConfig {
  /// unit, rl, hadamard, ek, volterra, e1
  std::string family = "rl";
  double alpha = 0.5;
  double sigma = 2.0;
  std::optional<double> a;
  std::optional<double> b;
  /// Second kernel: "auto" for the built-in conjugate, otherwise a family name
  /// whose primary kernel (same alpha, sigma, interval) is used.
  std::string with = "auto";
};

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {"unit", "rl", "hadamard", "ek", "volterra", "e1"};
  return names;
}

namespace detail {

inline std::pair<double, double> default_interval(const std::string& family) {
  if (family == "hadamard") return {1.0, std::exp(1.0)};
  if (family == "ek") return {0.5, 1.5};
  return {0.0, 1.0};
}

inline double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline std::string text(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(std::string("config: '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

inline void require_family(const std::string& f) {
  for (const auto& n : family_names()) {
    if (n == f) return;
  }
  throw ConfigError("unknown kernel family '" + f + "'");
}

// Primary kernel of a family with its weight.
inline std::pair<Kernel, WeightFunction> primary(const std::string& family, double alpha, double sigma, double a,
                                                 double b) {
  if (family == "unit") return {make_unit_kernel(a, b), WeightFunction::unit(a, b)};
  if (family == "rl") return {make_rl_kernel(alpha, a, b), WeightFunction::unit(a, b)};
  if (family == "hadamard") return {make_hadamard_kernel(alpha, a, b), WeightFunction::reciprocal(a, b)};
  if (family == "ek") {
    return {make_erdelyi_kober_kernel(alpha, sigma, a, b), WeightFunction::power(sigma, a, b)};
  }
  if (a != 0.0 || b != 1.0) throw ConfigError("family '" + family + "' is defined on [0, 1] only");
  if (family == "volterra") return {make_volterra_kernel(alpha), WeightFunction::unit()};
  return {make_e1_kernel(alpha), WeightFunction::unit()};
}

}  // namespace detail

inline double interval_a(const KernelConfig& c) { return c.a.value_or(detail::default_interval(c.family).first); }
inline double interval_b(const KernelConfig& c) { return c.b.value_or(detail::default_interval(c.family).second); }

inline KernelConfig kernel_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: kernel section must be an object");
  KernelConfig c;
  c.family = detail::text(j, "family", c.family);
  detail::require_family(c.family);
  c.alpha = detail::number(j, "alpha", c.alpha);
  c.sigma = detail::number(j, "sigma", c.sigma);
  if (j.contains("a")) c.a = detail::number(j, "a", 0.0);
  if (j.contains("b")) c.b = detail::number(j, "b", 1.0);
  c.with = detail::text(j, "with", c.with);
  if (c.with != "auto") detail::require_family(c.with);
  return c;
}

inline json to_json(const KernelConfig& c) {
  return {{"family", c.family}, {"alpha", c.alpha},         {"sigma", c.sigma},
          {"a", interval_a(c)}, {"b", interval_b(c)}, {"with", c.with}};
}

/// The kernel, its partner (built-in conjugate or the `with` family) and the weight.
inline KernelPair resolve(const KernelConfig& c) {
  detail::require_family(c.family);
  const double a = interval_a(c), b = interval_b(c);
  auto [k, w] = detail::primary(c.family, c.alpha, c.sigma, a, b);
  KernelPair p{k, std::nullopt, w};
  if (c.with != "auto") {
    detail::require_family(c.with);
    p.conjugate = detail::primary(c.with, c.alpha, c.sigma, a, b).first;
    return p;
  }
  if (c.family == "rl") return rl_pair(c.alpha, a, b);
  if (c.family == "hadamard") return hadamard_pair(c.alpha, a, b);
  if (c.family == "ek") return erdelyi_kober_pair(c.alpha, c.sigma, a, b);
  if (c.family == "volterra") return volterra_pair(c.alpha);
  if (c.family == "e1") return e1_pair(c.alpha);
  return p;
}

// ---------------------------------------------------------------------------
// BVP.

/// Registered right-hand sides f(t, u); c is the Lipschitz constant c_f.
///   one           f = 1
///   linear        f = c u
///   sine          f = c sin(u) + 1
///   forced        f = c u + cos(t)
///   manufactured  f = c (u - t^2) + D^{k'}(t^2), solved by u = t^2
inline const std::vector<std::string>& rhs_names() {
  static const std::vector<std::string> names = {"one", "linear", "sine", "forced", "manufactured"};
  return names;
}

struct BvpConfig {
  KernelConfig kernel;
  std::string rhs = "one";
  double lipschitz = 0.0;
  int mesh_size = 257;
  double tol = 1e-8;
  int max_iter = 200;
  double initial = 0.0;
};

inline BvpConfig bvp_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: bvp section must be an object");
  BvpConfig c;
  if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"));
  c.rhs = detail::text(j, "rhs", c.rhs);
  c.lipschitz = detail::number(j, "lipschitz", c.lipschitz);
  c.mesh_size = static_cast<int>(detail::number(j, "mesh_size", c.mesh_size));
  c.tol = detail::number(j, "tol", c.tol);
  c.max_iter = static_cast<int>(detail::number(j, "max_iter", c.max_iter));
  c.initial = detail::number(j, "initial", c.initial);
  return c;
}

inline json to_json(const BvpConfig& c) {
  return {{"kernel", to_json(c.kernel)}, {"rhs", c.rhs},           {"lipschitz", c.lipschitz},
          {"mesh_size", c.mesh_size},   {"tol", c.tol},           {"max_iter", c.max_iter},
          {"initial", c.initial}};
}

/// Builds the problem; the pair context is checked for conjugacy.
inline BvpProblem make_problem(const BvpConfig& c) {
  if (c.mesh_size < 4) throw ConfigError("bvp: mesh_size must be at least 4");
  if (!(c.tol > 0.0)) throw ConfigError("bvp: tol must be positive");
  if (c.max_iter < 1) throw ConfigError("bvp: max_iter must be positive");
  if (!(c.lipschitz >= 0.0)) throw ConfigError("bvp: lipschitz must be non-negative");
  const KernelPair pair = resolve(c.kernel);
  if (!pair.conjugate) throw ConfigError("bvp: kernel family '" + c.kernel.family + "' has no conjugate");
  BvpProblem p;
  p.ctx = OperatorContext::pair(pair);
  p.lipschitz = c.lipschitz;
  p.mesh = GridFunction::uniform_mesh(p.ctx.a(), p.ctx.b(), c.mesh_size);
  const double cf = c.lipschitz;
  if (c.rhs == "one") {
    p.rhs = [](double, double) { return 1.0; };
  } else if (c.rhs == "linear") {
    p.rhs = [cf](double, double u) { return cf * u; };
  } else if (c.rhs == "sine") {
    p.rhs = [cf](double, double u) { return cf * std::sin(u) + 1.0; };
  } else if (c.rhs == "forced") {
    p.rhs = [cf](double t, double u) { return cf * u + std::cos(t); };
  } else if (c.rhs == "manufactured") {
    auto g = std::make_shared<RealFunction>(
        derivative_as_function(p.ctx.derivative_context(), registered_function("tsq"), Side::left));
    p.rhs = [cf, g](double t, double u) { return cf * (u - t * t) + (*g)(t); };
  } else {
    throw ConfigError("unknown bvp rhs '" + c.rhs + "'");
  }
  return p;
}

// ---------------------------------------------------------------------------
// Tolerances.

inline constexpr const char* kToleranceTableVersion = "1.0";

/// Default pass/fail tolerance per check.
inline const std::map<std::string, double>& tolerance_table() {
  static const std::map<std::string, double> table = {
      {"conjugacy", 1e-7},         {"conjugacy_logarithmic", 1e-5},
      {"composition", 1e-6},       {"inversion", 5e-5},
      {"tn3", 1e-5},               {"ibp", 1e-4},
      {"ibp_rl", 1e-6},            {"ibp_e1", 1e-5},
      {"comphs", 1e-4},            {"tyyrg", 1e-4},
      {"katr", 1e-4},              {"ripgd", 1e-4},
      {"bvp_recovery", 5e-4},      {"bvp_ratio_slack", 1e-4},
      {"laplace_e1", 1e-6},        {"laplace_f", 1e-4},
      {"convolution_e1_f", 1e-5},  {"beta", 1e-9},
  };
  return table;
}

inline double tolerance(const std::string& key) {
  const auto& t = tolerance_table();
  const auto it = t.find(key);
  if (it == t.end()) throw ConfigError("no tolerance registered for '" + key + "'");
  return it->second;
}

inline json tolerance_json() {
  json j = json::object();
  j["version"] = kToleranceTableVersion;
  json values = json::object();
  for (const auto& [k, v] : tolerance_table()) values[k] = v;
  j["values"] = values;
  return j;
}

}  // namespace gfc::config
