#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "gfc/cli.hpp"

namespace {

using namespace gfc;
using json = nlohmann::json;
using cli::run_command;

struct Shell {
  int status = -1;
  std::string out;
};

Shell run_binary(const std::string& args) {
  Shell s;
  const std::string cmd = std::string(GFC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return s;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) s.out += buf.data();
  const int st = pclose(pipe);
  s.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return s;
}

TEST(CliConjugacy, RiemannLiouville) {
  const auto r = run_command("conjugacy", {{"family", "rl"}, {"alpha", 0.5}});
  EXPECT_EQ(r.exit_code, cli::kPass);
  EXPECT_TRUE(r.outputs["conjugate"].get<bool>());
  EXPECT_LE(r.outputs["max_dev_forward"].get<double>(), 1e-7);
  EXPECT_EQ(r.outputs["points"], 210);
  EXPECT_TRUE(r.tables.count("conjugacy.csv"));
}

TEST(CliConjugacy, UnitWithUnitIsNotConjugate) {
  const auto r = run_command("conjugacy", {{"family", "unit"}, {"with", "unit"}});
  EXPECT_FALSE(r.outputs["conjugate"].get<bool>());
  EXPECT_EQ(r.exit_code, cli::kHypothesisViolated);
}

TEST(CliConjugacy, ExponentialIntegralPair) {
  const auto r = run_command("conjugacy", {{"family", "e1"}, {"alpha", 1.0}, {"grid", 8}});
  EXPECT_EQ(r.exit_code, cli::kPass);
  EXPECT_EQ(r.inputs["tol"], 1e-5);
}

TEST(CliApply, LeftIntegralOfOne) {
  const auto r = run_command("apply", {{"op", "ileft"}, {"family", "rl"}, {"alpha", 0.5}, {"f", "one"}, {"grid", 11}});
  ASSERT_EQ(r.exit_code, cli::kPass);
  const auto v = r.outputs["values"];
  ASSERT_EQ(v.size(), 11u);
  for (int i = 0; i < 11; ++i) {
    const double x = i / 10.0;
    EXPECT_NEAR(v[i].get<double>(), 2.0 * std::sqrt(x / std::numbers::pi), 1e-10) << x;
  }
}

TEST(CliApply, TypeTwoOfZero) {
  const auto r = run_command("apply", {{"op", "s0"}, {"alpha", 0.5}, {"f", "zero"}});
  for (const auto& v : r.outputs["values"]) EXPECT_EQ(v.get<double>(), 0.0);
}

TEST(CliApply, FractionalDerivativeMatchesRepresentation) {
  const auto r = run_command("apply", {{"op", "d0theta"}, {"theta", 2.0}, {"f", "ident"}, {"grid", 6}});
  const auto v = r.outputs["values"];
  for (int i = 1; i < 5; ++i) {
    const double x = i / 5.0;
    const double rep = x * exp_integral_e1(x) - std::exp(-x) + 1.0;
    EXPECT_NEAR(v[i].get<double>(), rep, 1e-4) << x;
  }
}

TEST(CliApply, FunctionFromCsv) {
  const auto path = std::filesystem::temp_directory_path() / "gfc_cli_f.csv";
  std::ofstream(path) << GridFunction::sample([](double x) { return x; }, GridFunction::uniform_mesh(0, 1, 5)).to_csv();
  const auto r = run_command("apply", {{"op", "ileft"}, {"family", "unit"}, {"f_csv", path.string()}, {"grid", 3}});
  EXPECT_NEAR(r.outputs["values"][2].get<double>(), 0.5, 1e-12);
  std::filesystem::remove(path);
}

TEST(CliApply, UnknownOperator) {
  EXPECT_EQ(run_command("apply", {{"op", "curl"}}).exit_code, cli::kConfigError);
}

TEST(CliVerify, Suites) {
  const auto inv =
      run_command("verify", {{"suite", "inversion"}, {"family", "rl"}, {"alpha", 0.25}, {"f", "cos"}, {"points", 3}});
  EXPECT_EQ(inv.exit_code, cli::kPass) << inv.outputs.dump();
  EXPECT_LE(inv.outputs["max_residual"].get<double>(), 5e-5);
  const auto ibp = run_command("verify", {{"suite", "ibp"}, {"family", "unit"}});
  EXPECT_EQ(ibp.exit_code, cli::kPass);
  EXPECT_LE(ibp.outputs["max_residual"].get<double>(), 1e-12);
  const auto comphs = run_command("verify", {{"suite", "comphs"}, {"alpha", 0.5}});
  EXPECT_EQ(comphs.exit_code, cli::kPass);
  EXPECT_LE(comphs.outputs["max_residual"].get<double>(), 1e-4);
  EXPECT_EQ(run_command("verify", {{"suite", "nonsense"}}).exit_code, cli::kConfigError);
}

TEST(CliConverge, Ladders) {
  const auto s0 = run_command("converge", {{"mode", "s0"}, {"f", "ident"}, {"alphas", "0.2,0.1,0.05"}});
  EXPECT_EQ(s0.exit_code, cli::kPass);
  EXPECT_TRUE(s0.outputs["monotone"].get<bool>());
  const auto d0 = run_command("converge", {{"mode", "d0"}, {"f", "tsq"}, {"thetas", "1.2,1.1,1.05"}});
  EXPECT_TRUE(d0.outputs["monotone"].get<bool>());
  const auto e = d0.outputs["errors"].get<std::vector<double>>();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_GT(e[0], e[1]);
  EXPECT_GT(e[1], e[2]);
  const auto z = run_command("converge", {{"mode", "s0"}, {"f", "zero"}});
  for (double v : z.outputs["errors"].get<std::vector<double>>()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(z.exit_code, cli::kPass);
}

TEST(CliBvp, Examples) {
  const auto one = run_command("bvp", {{"family", "rl"}, {"alpha", 0.5}, {"rhs", "one"}, {"mesh", 33}});
  EXPECT_EQ(one.exit_code, cli::kPass);
  EXPECT_NEAR(one.outputs["u_at_b"].get<double>(), 1.1283792, 1e-7);
  const auto man = run_command("bvp", {{"rhs", "manufactured"}, {"lipschitz", 0.2}});
  EXPECT_EQ(man.exit_code, cli::kPass);
  EXPECT_LE(man.outputs["manufactured_error"].get<double>(), 5e-4);
  const auto bad = run_command("bvp", {{"rhs", "linear"}, {"lipschitz", 1.0}, {"mesh", 17}});
  EXPECT_EQ(bad.exit_code, cli::kHypothesisViolated);
  EXPECT_GE(bad.outputs["contraction_constant"].get<double>(), 1.0);
  const auto budget = run_command("bvp", {{"rhs", "forced"}, {"lipschitz", 0.5}, {"max_iter", 2}, {"mesh", 17}});
  EXPECT_EQ(budget.exit_code, cli::kBudgetExhausted);
}

TEST(CliReport, SelfDescribing) {
  const auto r = run_command("conjugacy", {{"family", "rl"}, {"alpha", 0.75}, {"grid", 4}});
  const auto j = r.to_json();
  EXPECT_EQ(j["tolerances"]["table"]["version"], config::kToleranceTableVersion);
  EXPECT_TRUE(j["units"].contains("wall_time"));
  EXPECT_GE(j["wall_time"].get<double>(), 0.0);
  EXPECT_EQ(run_command("conjugacy", {{"family", "rl"}, {"alpha", 2.0}}).exit_code, cli::kConfigError);
  EXPECT_EQ(run_command("frobnicate", json::object()).exit_code, cli::kConfigError);
}

TEST(CliBinary, ExitCodesAndOutput) {
  const auto ok = run_binary("conjugacy --family rl --alpha 0.5 --grid 6");
  EXPECT_EQ(ok.status, 0);
  const auto j = json::parse(ok.out);
  EXPECT_TRUE(j["outputs"]["conjugate"].get<bool>());
  EXPECT_EQ(run_binary("conjugacy --family unit --with unit --grid 4").status, 2);
  EXPECT_EQ(run_binary("bvp --family rl --alpha 0.5 --rhs linear --lipschitz 1.0 --mesh 17").status, 2);
  EXPECT_EQ(run_binary("conjugacy --family nope").status, 4);
  EXPECT_EQ(run_binary("conjugacy --alpha notanumber").status, 4);
  EXPECT_EQ(run_binary("").status, 4);
}

TEST(CliBinary, ConfigFileAndOutputDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "gfc_cli_out";
  std::filesystem::remove_all(dir);
  const auto cfg = std::filesystem::temp_directory_path() / "gfc_cli_cfg.json";
  std::ofstream(cfg) << R"({"family": "rl", "alpha": 0.5, "rhs": "one", "mesh": 17})";
  const auto r = run_binary("bvp --config " + cfg.string() + " --alpha 0.25 --out " + dir.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "solution.csv"));
  const auto j = json::parse(std::ifstream(dir / "report.json"));
  EXPECT_EQ(j["inputs"]["kernel"]["alpha"], 0.25);
  EXPECT_EQ(j["inputs"]["mesh_size"], 17);
  std::filesystem::remove_all(dir);
  std::filesystem::remove(cfg);
}

}  // namespace
