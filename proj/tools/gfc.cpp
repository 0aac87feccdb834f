// gfc: conjugacy checks, operator sweeps, identity suites, convergence
// ladders and the BVP solver from the command line.
//
// Every invocation prints one JSON run report on stdout. With --out DIR the
// report (report.json) and the command's CSV tables are also written there.
// A JSON file given by --config supplies the same keys as the flags; flags
// given on the command line take precedence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfc/cli.hpp"

namespace {

using json = nlohmann::json;

enum class Kind { number, integer, text, list, flag };

struct Flag {
  std::string key;
  Kind kind;
  std::string value;
  bool on = false;
  CLI::Option* opt = nullptr;
};

class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help) : sub_(app.add_subcommand(name, help)) {
    sub_->add_option("--config", config_path_, "JSON configuration file")->check(CLI::ExistingFile);
    sub_->add_option("--out", out_dir_, "directory for report.json and CSV tables");
  }

  Command& add(const std::string& key, Kind kind, const std::string& help) {
    flags_.push_back(std::make_unique<Flag>(Flag{key, kind, "", false, nullptr}));
    Flag& f = *flags_.back();
    std::string name = "--" + key;
    for (auto& c : name) {
      if (c == '_') c = '-';
    }
    if (kind == Kind::flag) {
      f.opt = sub_->add_flag(name, f.on, help);
    } else {
      f.opt = sub_->add_option(name, f.value, help);
    }
    return *this;
  }

  CLI::App* app() const { return sub_; }
  const std::string& out_dir() const { return out_dir_; }

  json resolve() const {
    json cfg = json::object();
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw gfc::ConfigError("cannot parse " + config_path_ + ": " + e.what());
      }
      if (!cfg.is_object()) throw gfc::ConfigError("config file must hold a JSON object");
    }
    for (const auto& fp : flags_) {
      const Flag& f = *fp;
      if (f.opt->count() == 0) continue;
      switch (f.kind) {
        case Kind::number:
          cfg[f.key] = parse_number(f);
          break;
        case Kind::integer: {
          const double v = parse_number(f);
          if (v != static_cast<double>(static_cast<long long>(v))) {
            throw gfc::ConfigError("--" + f.key + " must be an integer");
          }
          cfg[f.key] = static_cast<long long>(v);
          break;
        }
        case Kind::text:
        case Kind::list:
          cfg[f.key] = f.value;
          break;
        case Kind::flag:
          cfg[f.key] = f.on;
          break;
      }
    }
    return cfg;
  }

 private:
  static double parse_number(const Flag& f) {
    try {
      std::size_t used = 0;
      const double v = std::stod(f.value, &used);
      if (used != f.value.size()) throw std::invalid_argument(f.value);
      return v;
    } catch (const std::logic_error&) {
      throw gfc::ConfigError("--" + f.key + " expects a number, got '" + f.value + "'");
    }
  }

  CLI::App* sub_;
  std::string config_path_;
  std::string out_dir_;
  std::vector<std::unique_ptr<Flag>> flags_;
};

void add_kernel_flags(Command& c) {
  c.add("family", Kind::text, "kernel family: unit, rl, hadamard, ek, volterra, e1")
      .add("alpha", Kind::number, "kernel order")
      .add("sigma", Kind::number, "Erdelyi-Kober exponent")
      .add("a", Kind::number, "left end of the interval")
      .add("b", Kind::number, "right end of the interval")
      .add("with", Kind::text, "second kernel family (default: built-in conjugate)");
}

int emit(const gfc::cli::RunReport& r, const std::string& out_dir) {
  const json j = r.to_json();
  std::cout << j.dump(2) << '\n';
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream(std::filesystem::path(out_dir) / "report.json") << j.dump(2) << '\n';
    for (const auto& [name, body] : r.tables) {
      std::ofstream(std::filesystem::path(out_dir) / name, std::ios::binary) << body;
    }
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operators with respect to kernel functions: checks, sweeps and solvers"};
  app.require_subcommand(1);

  Command conj(app, "conjugacy", "check that two kernels are conjugate on a triangular grid");
  add_kernel_flags(conj);
  conj.add("grid", Kind::integer, "grid size n (n x n triangle, default 20)")
      .add("tol", Kind::number, "deviation tolerance");

  Command apply(app, "apply", "evaluate an operator on an x-grid");
  add_kernel_flags(apply);
  apply.add("op", Kind::text, "ileft, iright, dleft, dright, h0, h1, s0, s1, d0theta, d1theta")
      .add("f", Kind::text, "registered function: zero, one, ident, tsq, cos, sin, exp")
      .add("f_csv", Kind::text, "CSV file with x,value rows used as f")
      .add("grid", Kind::integer, "number of grid points (default 11)")
      .add("theta", Kind::number, "derivative order for d0theta / d1theta");

  Command verify(app, "verify", "run a named identity suite");
  add_kernel_flags(verify);
  verify.add("suite", Kind::text, "inversion, composition, tn3, ibp, comphs, cht, tyyrg, katr, ripgd")
      .add("f", Kind::list, "function name(s), comma separated where a list is accepted")
      .add("g", Kind::text, "second function for integration by parts")
      .add("beta", Kind::number, "second order for the composition suite")
      .add("pair_alpha", Kind::number, "order of the conjugate pair in the composition suite")
      .add("theta", Kind::list, "order(s) theta")
      .add("points", Kind::integer, "interior grid size for the inversion suite")
      .add("tol", Kind::number, "override the suite tolerance");

  Command converge(app, "converge", "error ladder of an approximation theorem");
  converge.add("mode", Kind::text, "s0, s1, d0 or d1")
      .add("f", Kind::text, "registered function")
      .add("alphas", Kind::list, "comma separated alpha ladder")
      .add("thetas", Kind::list, "comma separated theta ladder");

  Command bvp(app, "bvp", "solve the boundary value problem by Picard iteration");
  add_kernel_flags(bvp);
  bvp.add("rhs", Kind::text, "one, linear, sine, forced, manufactured")
      .add("lipschitz", Kind::number, "Lipschitz constant c_f of the right-hand side")
      .add("mesh", Kind::integer, "mesh size (default 257)")
      .add("tol", Kind::number, "stopping tolerance on successive differences")
      .add("max_iter", Kind::integer, "iteration budget")
      .add("initial", Kind::number, "constant initial iterate")
      .add("verify", Kind::flag, "round-trip the solution through the derivative operator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gfc::cli::kConfigError;
  }

  for (Command* c : {&conj, &apply, &verify, &converge, &bvp}) {
    if (!c->app()->parsed()) continue;
    gfc::cli::RunReport r;
    try {
      r = gfc::cli::run_command(c->app()->get_name(), c->resolve());
    } catch (const gfc::ConfigError& e) {
      r.command = c->app()->get_name();
      r.outputs["error"] = e.what();
      r.exit_code = gfc::cli::kConfigError;
    }
    return emit(r, c->out_dir());
  }
  return gfc::cli::kConfigError;
}
