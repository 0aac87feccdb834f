#pragma once

// Command implementations behind the `gfc` executable. Each command takes the
// resolved JSON configuration and returns a RunReport; argument parsing lives
// in tools/gfc.cpp.

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfc/bvp.hpp"
#include "gfc/checks.hpp"
#include "gfc/config.hpp"
#include "gfc/fractional.hpp"
#include "gfc/grid_function.hpp"
#include "gfc/kernels.hpp"
#include "gfc/operators.hpp"

namespace gfc::cli {

using json = nlohmann::json;

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kHypothesisViolated = 2,
  kBudgetExhausted = 3,
  kConfigError = 4,
};

struct RunReport {
  std::string command;
  json inputs = json::object();
  json outputs = json::object();
  json tolerances = json::object();
  double wall_time = 0.0;
  int exit_code = kPass;
  /// CSV tables keyed by file name.
  std::map<std::string, std::string> tables;

  json to_json() const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["tolerances"] = tolerances;
    j["wall_time"] = wall_time;
    j["exit_code"] = exit_code;
    j["units"] = {{"wall_time", "seconds"},
                  {"residual", "absolute, same units as the operator values"},
                  {"tolerance", "absolute unless named *_ratio_*"}};
    json files = json::array();
    for (const auto& [name, body] : tables) files.push_back(name);
    j["tables"] = files;
    return j;
  }
};

namespace detail {

inline std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  return GridFunction::fmt(v);
}

// Quote a CSV field when it carries a separator, quote, or line break.
inline std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Numbers may arrive as strings from list-valued flags ("--theta 1.5").
inline double number(const json& cfg, const char* key, double fallback) {
  if (cfg.contains(key) && cfg.at(key).is_string()) {
    const std::string v = cfg.at(key).get<std::string>();
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::logic_error&) {
    }
    throw ConfigError(std::string("config: '") + key + "' must be a number, got '" + v + "'");
  }
  return config::detail::number(cfg, key, fallback);
}
inline std::string text(const json& cfg, const char* key, const std::string& fallback) {
  return config::detail::text(cfg, key, fallback);
}

inline int integer(const json& cfg, const char* key, int fallback) {
  const double v = number(cfg, key, fallback);
  if (v != std::floor(v)) throw ConfigError(std::string("config: '") + key + "' must be an integer");
  return static_cast<int>(v);
}

inline std::vector<double> number_list(const json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(std::string("config: '") + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw ConfigError(std::string("config: bad number '") + item + "' in '" + key + "'");
      }
    }
  } else if (v.is_number()) {
    out.push_back(v.get<double>());
  } else {
    throw ConfigError(std::string("config: '") + key + "' must be a list of numbers");
  }
  if (out.empty()) throw ConfigError(std::string("config: '") + key + "' is empty");
  return out;
}

inline std::vector<std::string> name_list(const json& cfg, const char* key, std::vector<std::string> fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(e.get<std::string>());
  } else {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
  }
  return out;
}

inline RealFunction function_from(const json& cfg, const char* key, const std::string& fallback) {
  const std::string csv_key = std::string(key) + "_csv";
  if (cfg.contains(csv_key)) {
    const std::string path = cfg.at(csv_key).get<std::string>();
    return from_grid(GridFunction::from_csv(path), path);
  }
  return registered_function(text(cfg, key, fallback));
}

inline json checks_json(const std::vector<checks::Check>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    json e = {{"name", c.name}, {"tolerance", c.tolerance}, {"pass", c.passed()}};
    e["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    if (!c.error.empty()) e["error"] = c.error;
    arr.push_back(e);
  }
  return arr;
}

inline std::string checks_csv(const std::vector<checks::Check>& cs) {
  std::string s = "check,residual,tolerance,pass\r\n";
  for (const auto& c : cs) {
    s += csv_text(c.name) + "," + csv_number(c.residual) + "," + csv_number(c.tolerance) + "," +
         (c.passed() ? "true" : "false") + "\r\n";
  }
  return s;
}

inline config::KernelConfig kernel_config(const json& cfg, const std::string& family_fallback = "rl") {
  json k = cfg.contains("kernel") ? cfg.at("kernel") : cfg;
  if (!k.contains("family")) k["family"] = family_fallback;
  return config::kernel_from_json(k);
}

inline KernelPair require_pair(const config::KernelConfig& kc) {
  KernelPair p = config::resolve(kc);
  if (!p.conjugate) {
    throw ConfigError("kernel family '" + kc.family + "' has no built-in conjugate; name one with --with");
  }
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Conjugacy of two kernels over a triangular grid (default 20 x 20).
inline RunReport cmd_conjugacy(const json& cfg) {
  RunReport r;
  r.command = "conjugacy";
  const auto kc = detail::kernel_config(cfg);
  const int n = detail::integer(cfg, "grid", 20);
  if (n < 1) throw ConfigError("conjugacy: grid must be positive");
  const KernelPair p = detail::require_pair(kc);
  const double tol = detail::number(cfg, "tol", default_conjugacy_tolerance(p.kernel, *p.conjugate));
  r.inputs = config::to_json(kc);
  r.inputs["grid"] = n;
  r.inputs["tol"] = tol;
  const auto rep = check_conjugacy(p.kernel, *p.conjugate, p.weight, triangular_grid(p.weight.a, p.weight.b, n), tol);
  r.outputs["kernel"] = p.kernel.name;
  r.outputs["partner"] = p.conjugate->name;
  r.outputs["conjugate"] = rep.conjugate;
  r.outputs["max_dev_forward"] = rep.max_dev_forward;
  r.outputs["max_dev_backward"] = rep.max_dev_backward;
  r.outputs["points"] = rep.points.size();
  json fails = json::array();
  for (const auto& f : rep.failures) fails.push_back({{"x", f.x}, {"y", f.y}, {"error", f.message}});
  r.outputs["failures"] = fails;
  r.tolerances["conjugacy"] = tol;
  std::string csv = "x,y,delta_forward,delta_backward\r\n";
  for (const auto& pt : rep.points) {
    csv += detail::csv_number(pt.x) + "," + detail::csv_number(pt.y) + "," + detail::csv_number(pt.forward) + "," +
           detail::csv_number(pt.backward) + "\r\n";
  }
  r.tables["conjugacy.csv"] = csv;
  r.exit_code = rep.conjugate ? kPass : kHypothesisViolated;
  return r;
}

inline const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> ops = {"ileft", "iright", "dleft", "dright", "h0",
                                               "h1",    "s0",     "s1",    "d0theta", "d1theta"};
  return ops;
}

/// Evaluates one operator on a uniform x-grid.
inline RunReport cmd_apply(const json& cfg) {
  RunReport r;
  r.command = "apply";
  const std::string op = detail::text(cfg, "op", "");
  if (std::find(operator_names().begin(), operator_names().end(), op) == operator_names().end()) {
    throw ConfigError("apply: unknown operator '" + op + "'");
  }
  const int n = detail::integer(cfg, "grid", 11);
  if (n < 2) throw ConfigError("apply: grid needs at least two points");
  const RealFunction f = detail::function_from(cfg, "f", "one");
  r.inputs["op"] = op;
  r.inputs["grid"] = n;
  r.inputs["f"] = cfg.contains("f_csv") ? cfg.at("f_csv") : json(f.name);

  const bool fractional = op[0] == 'h' || op[0] == 's' || op == "d0theta" || op == "d1theta";
  double a = 0.0, b = 1.0;
  OperatorContext ctx;
  if (!fractional) {
    const auto kc = detail::kernel_config(cfg);
    r.inputs["kernel"] = config::to_json(kc);
    const bool derivative = op[0] == 'd';
    if (derivative) {
      ctx = OperatorContext::pair(detail::require_pair(kc)).derivative_context();
    } else {
      const KernelPair p = config::resolve(kc);
      ctx = OperatorContext::single(p.kernel, p.weight);
    }
    a = ctx.a();
    b = ctx.b();
  }
  const double alpha = detail::number(cfg, "alpha", 0.5);
  const double theta = detail::number(cfg, "theta", 2.0);
  if (op[0] == 'h' || op[0] == 's') r.inputs["alpha"] = alpha;
  if (op == "d0theta" || op == "d1theta") r.inputs["theta"] = theta;

  std::string csv = "x,value,error_estimate\r\n";
  json errors = json::array();
  json values = json::array();
  bool budget = false;
  for (const double x : GridFunction::uniform_mesh(a, b, n)) {
    double value = NAN, err = NAN;
    try {
      if (op == "ileft" || op == "iright") {
        const auto q = op == "ileft" ? left_integral_result(ctx, f, x) : right_integral_result(ctx, f, x);
        if (!q.converged) throw QuadratureError(op + ": quadrature budget exhausted", q.value, q.error_estimate);
        value = q.value;
        err = q.error_estimate;
      } else if (op == "dleft") {
        value = left_derivative(ctx, f, x);
      } else if (op == "dright") {
        value = right_derivative(ctx, f, x);
      } else if (op[0] == 'h' || op[0] == 's') {
        const auto c = op[0] == 'h' ? frac::type1_context(alpha) : frac::type2_context(alpha);
        const auto q = op[1] == '0' ? left_integral_result(c, f, x) : right_integral_result(c, f, x);
        if (!q.converged) throw QuadratureError(op + ": quadrature budget exhausted", q.value, q.error_estimate);
        value = q.value;
        err = q.error_estimate;
      } else {
        const auto d = op == "d0theta" ? frac::frac_derivative_left(theta, f, x) : frac::frac_derivative_right(theta, f, x);
        value = d.direct;
        if (d.representation) err = std::abs(d.direct - *d.representation);
      }
    } catch (const AccuracyError& e) {
      budget = true;
      errors.push_back({{"x", x}, {"error", e.what()}});
    } catch (const DomainError& e) {
      errors.push_back({{"x", x}, {"error", e.what()}});
    }
    values.push_back(std::isfinite(value) ? json(value) : json(nullptr));
    csv += detail::csv_number(x) + "," + detail::csv_number(value) + "," + detail::csv_number(err) + "\r\n";
  }
  r.outputs["values"] = values;
  r.outputs["errors"] = errors;
  r.tables["apply.csv"] = csv;
  r.exit_code = budget ? kBudgetExhausted : kPass;
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s = {"inversion", "composition", "tn3",  "ibp",  "comphs",
                                             "cht",       "tyyrg",       "katr", "ripgd"};
  return s;
}

/// Runs a named identity suite.
inline RunReport cmd_verify(const json& cfg) {
  using config::tolerance;
  RunReport r;
  r.command = "verify";
  const std::string suite = detail::text(cfg, "suite", "");
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw ConfigError("verify: unknown suite '" + suite + "'");
  }
  r.inputs["suite"] = suite;
  std::vector<checks::Check> cs;
  auto note_tol = [&](const std::string& key) {
    r.tolerances[key] = detail::number(cfg, "tol", tolerance(key));
    return r.tolerances[key].get<double>();
  };

  if (suite == "inversion") {
    const auto kc = detail::kernel_config(cfg);
    r.inputs["kernel"] = config::to_json(kc);
    const auto fns = detail::name_list(cfg, "f", {"one", "ident", "tsq", "cos"});
    r.inputs["f"] = fns;
    const int pts = detail::integer(cfg, "points", 9);
    cs = checks::inversion_checks(kc.family, detail::require_pair(kc), fns, note_tol("inversion"), pts);
  } else if (suite == "composition") {
    const double a1 = detail::number(cfg, "alpha", 0.3);
    const double a2 = detail::number(cfg, "beta", 0.4);
    const RealFunction f = detail::function_from(cfg, "f", "cos");
    r.inputs["alpha"] = a1;
    r.inputs["beta"] = a2;
    r.inputs["f"] = f.name;
    const double tol = note_tol("composition");
    const auto c1 = OperatorContext::single(make_rl_kernel(a1), WeightFunction::unit());
    const auto c2 = OperatorContext::single(make_rl_kernel(a2), WeightFunction::unit());
    for (Side side : {Side::left, Side::right}) {
      const std::string s = side == Side::left ? "left" : "right";
      cs.push_back(checks::composition_check("rl semigroup " + s, c1, c2, f, side, tol));
    }
    // The pair case takes its order from pair_alpha; alpha belongs to the semigroup.
    auto kc = detail::kernel_config(cfg);
    kc.alpha = detail::number(cfg, "pair_alpha", 0.5);
    r.inputs["pair"] = config::to_json(kc);
    const KernelPair p = detail::require_pair(kc);
    for (Side side : {Side::left, Side::right}) {
      const std::string s = side == Side::left ? "left" : "right";
      cs.push_back(checks::pair_to_plain_check(kc.family + " pair to plain integral " + s, p, f, side, tol));
    }
  } else if (suite == "tn3") {
    const auto kc = detail::kernel_config(cfg);
    r.inputs["kernel"] = config::to_json(kc);
    const RealFunction f = detail::function_from(cfg, "f", "one");
    r.inputs["f"] = f.name;
    const auto ctx = OperatorContext::pair(detail::require_pair(kc));
    const double tol = note_tol("tn3");
    const auto xs = checks::interior_grid(ctx.a(), ctx.b(), 3);
    cs.push_back(checks::defect_check("boundary defect left", ctx, f, Side::left, xs, tol));
    cs.push_back(checks::defect_check("boundary defect right", ctx, f, Side::right, xs, tol));
  } else if (suite == "ibp") {
    const auto kc = detail::kernel_config(cfg);
    r.inputs["kernel"] = config::to_json(kc);
    const RealFunction f = detail::function_from(cfg, "f", "ident");
    const RealFunction g = detail::function_from(cfg, "g", "one");
    r.inputs["f"] = f.name;
    r.inputs["g"] = g.name;
    const KernelPair p = config::resolve(kc);
    const double tol = note_tol("ibp");
    cs.push_back(checks::run(kc.family + " integration by parts", tol,
                             [&] { return integration_by_parts_residual(p.kernel, p.weight, f, g); }));
  } else if (suite == "comphs") {
    const double alpha = detail::number(cfg, "alpha", 0.5);
    const auto fns = detail::name_list(cfg, "f", {"ident", "cos"});
    r.inputs["alpha"] = alpha;
    r.inputs["f"] = fns;
    const double tol = note_tol("comphs");
    for (const auto& fn : fns) {
      cs.push_back(checks::comphs_check("H(S f) and S(H f) f=" + fn, alpha, registered_function(fn), tol));
    }
  } else if (suite == "cht") {
    const double alpha = detail::number(cfg, "alpha", 1.0);
    const RealFunction f1 = detail::function_from(cfg, "f", "ident");
    const RealFunction f2 = detail::function_from(cfg, "f", "exp");
    const RealFunction g = detail::function_from(cfg, "g", "one");
    r.inputs["alpha"] = alpha;
    const double tol = note_tol("ibp");
    const auto w = WeightFunction::unit();
    cs.push_back(checks::run("type I integration by parts f=" + f1.name, tol, [&] {
      return integration_by_parts_residual(make_volterra_kernel(alpha), w, f1, g);
    }));
    cs.push_back(checks::run("type II integration by parts f=" + f2.name, tol, [&] {
      return integration_by_parts_residual(make_e1_kernel(alpha), w, f2, g);
    }));
  } else if (suite == "tyyrg") {
    const auto thetas = detail::number_list(cfg, "theta", {1.5, 2.0});
    const auto fns = detail::name_list(cfg, "f", {"ident", "tsq", "sin"});
    r.inputs["theta"] = thetas;
    r.inputs["f"] = fns;
    const double tol = note_tol("tyyrg");
    for (double th : thetas) {
      for (const auto& fn : fns) {
        cs.push_back(checks::representation_check("direct vs representation theta=" + GridFunction::fmt(th) + " f=" + fn,
                                                  th, registered_function(fn), tol));
      }
    }
  } else if (suite == "katr") {
    const double theta = detail::number(cfg, "theta", 1.5);
    const RealFunction f = detail::function_from(cfg, "f", "one");
    r.inputs["theta"] = theta;
    r.inputs["f"] = f.name;
    const double tol = note_tol("katr");
    cs.push_back(checks::katr_check("H(D f) left", theta, f, Side::left, {0.25, 0.5, 0.75}, tol));
    cs.push_back(checks::katr_check("H(D f) right", theta, f, Side::right, {0.25, 0.5, 0.75}, tol));
  } else if (suite == "ripgd") {
    const double theta = detail::number(cfg, "theta", 1.5);
    const RealFunction pf = detail::function_from(cfg, "f", "one");
    const RealFunction pg = detail::function_from(cfg, "g", "ident");
    r.inputs["theta"] = theta;
    r.inputs["f"] = pf.name;
    r.inputs["g"] = pg.name;
    const double tol = note_tol("ripgd");
    cs.push_back(checks::run("fractional integration by parts", tol,
                             [&] { return frac::frac_ibp_residual(theta, pf, pg); }));
  }

  r.outputs["checks"] = detail::checks_json(cs);
  r.outputs["max_residual"] = checks::max_residual(cs);
  r.outputs["pass"] = checks::all_passed(cs);
  r.tables["verify.csv"] = detail::checks_csv(cs);
  r.exit_code = kPass;
  if (!checks::all_passed(cs)) {
    bool budget = false;
    for (const auto& c : cs) budget = budget || !c.error.empty();
    r.exit_code = budget ? kBudgetExhausted : kCheckFailed;
  }
  return r;
}

/// Error ladder of an approximation theorem as alpha or theta - 1 shrinks.
inline RunReport cmd_converge(const json& cfg) {
  RunReport r;
  r.command = "converge";
  const std::string mode = detail::text(cfg, "mode", "s0");
  if (mode != "s0" && mode != "s1" && mode != "d0" && mode != "d1") {
    throw ConfigError("converge: mode must be s0, s1, d0 or d1");
  }
  const bool derivative = mode[0] == 'd';
  const RealFunction f = detail::function_from(cfg, "f", derivative ? "tsq" : "ident");
  const Side side = mode[1] == '0' ? Side::left : Side::right;
  r.inputs["mode"] = mode;
  r.inputs["f"] = f.name;
  checks::Ladder ladder;
  if (derivative) {
    const auto thetas = detail::number_list(cfg, "thetas", {1.2, 1.1, 1.05, 1.025});
    r.inputs["thetas"] = thetas;
    ladder = checks::derivative_ladder(f, thetas, side);
  } else {
    const auto alphas = detail::number_list(cfg, "alphas", {0.2, 0.1, 0.05, 0.025});
    r.inputs["alphas"] = alphas;
    ladder = checks::identity_ladder(f, alphas, side);
  }
  r.outputs["errors"] = ladder.errors;
  r.outputs["monotone"] = ladder.monotone();
  r.outputs["norm"] = "L1[0,1]";
  std::string csv = std::string(derivative ? "theta" : "alpha") + ",error\r\n";
  for (std::size_t i = 0; i < ladder.errors.size(); ++i) {
    csv += detail::csv_number(ladder.parameters[i]) + "," + detail::csv_number(ladder.errors[i]) + "\r\n";
  }
  r.tables["ladder.csv"] = csv;
  r.exit_code = ladder.monotone() ? kPass : kCheckFailed;
  return r;
}

/// Picard solution of the kernel-derivative boundary value problem.
inline RunReport cmd_bvp(const json& cfg) {
  RunReport r;
  r.command = "bvp";
  json flat = cfg;
  flat["kernel"] = config::to_json(detail::kernel_config(cfg));
  config::BvpConfig c = config::bvp_from_json(flat);
  if (cfg.contains("mesh")) c.mesh_size = detail::integer(cfg, "mesh", c.mesh_size);
  r.inputs = config::to_json(c);
  r.tolerances["picard"] = c.tol;
  r.tolerances["bvp_recovery"] = config::tolerance("bvp_recovery");
  r.tolerances["bvp_ratio_slack"] = config::tolerance("bvp_ratio_slack");
  const BvpProblem p = config::make_problem(c);
  const double C = contraction_constant(p);
  r.outputs["contraction_constant"] = C;
  BvpSolution s;
  try {
    s = picard_solve(p, c.tol, c.max_iter, c.initial);
  } catch (const ContractionViolated& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kHypothesisViolated;
    return r;
  } catch (const MaxIterExceeded& e) {
    r.outputs["error"] = e.what();
    s = e.best();
    r.exit_code = kBudgetExhausted;
  }
  r.outputs["iterations"] = s.iterations;
  r.outputs["residual_history"] = s.residual_history;
  r.outputs["fixed_point_defect"] = s.fixed_point_defect;
  r.outputs["u_at_b"] = s.u.values().back();
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < s.residual_history.size(); ++i) {
    if (s.residual_history[i - 1] > 0.0) worst_ratio = std::max(worst_ratio, s.residual_history[i] / s.residual_history[i - 1]);
  }
  r.outputs["max_residual_ratio"] = worst_ratio;
  bool ok = worst_ratio <= C + config::tolerance("bvp_ratio_slack");
  if (c.rhs == "manufactured") {
    double err = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      const double t = s.u.mesh()[i];
      err = std::max(err, std::abs(s.u.values()[i] - t * t));
    }
    r.outputs["manufactured_error"] = err;
    ok = ok && err <= config::tolerance("bvp_recovery");
  }
  if (cfg.value("verify", false) && r.exit_code == kPass) {
    const auto v = verify_solution(p, s);
    r.outputs["equation_residual"] = v.equation_residual;
    r.outputs["boundary_value"] = v.boundary_value;
    r.tolerances["bvp_equation"] = 10 * c.tol;
    ok = ok && v.equation_residual <= 10 * c.tol && std::abs(v.boundary_value) <= 10 * c.tol;
  }
  r.tables["solution.csv"] = s.u.to_csv("u", "t");
  if (r.exit_code == kPass && !ok) r.exit_code = kCheckFailed;
  return r;
}

/// Dispatches a command and maps library exceptions onto exit codes. The
/// versioned tolerance table and the wall time are filled in here.
inline RunReport run_command(const std::string& command, const json& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r;
  try {
    if (command == "conjugacy") {
      r = cmd_conjugacy(cfg);
    } else if (command == "apply") {
      r = cmd_apply(cfg);
    } else if (command == "verify") {
      r = cmd_verify(cfg);
    } else if (command == "converge") {
      r = cmd_converge(cfg);
    } else if (command == "bvp") {
      r = cmd_bvp(cfg);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const RelationViolated& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kHypothesisViolated;
  } catch (const ContractionViolated& e) {
    r.outputs["error"] = e.what();
    r.outputs["contraction_constant"] = e.constant();
    r.exit_code = kHypothesisViolated;
  } catch (const AccuracyError& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kBudgetExhausted;
  } catch (const MaxIterExceeded& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kBudgetExhausted;
  } catch (const ConfigError& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kConfigError;
  } catch (const DomainError& e) {
    r.outputs["error"] = e.what();
    r.exit_code = kConfigError;
  } catch (const json::exception& e) {
    r.outputs["error"] = std::string("config: ") + e.what();
    r.exit_code = kConfigError;
  }
  r.command = command;
  if (r.inputs.empty()) r.inputs = cfg;
  r.tolerances["table"] = config::tolerance_json();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace gfc::cli
