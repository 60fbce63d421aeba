// Copyright 2026 The qres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli_commands.hpp"

namespace qres::cli {
namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result run_shell(const std::string& cmd) {
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Runs the binary with stdout and stderr merged.
Result run_cli(const std::string& args) { return run_shell(std::string(QRES_CLI_PATH) + " " + args + " 2>&1"); }

// Runs the binary keeping stdout only.
Result run_cli_stdout(const std::string& env, const std::string& args) {
  return run_shell(env + " " + QRES_CLI_PATH + " " + args + " 2>/dev/null");
}

std::string config(const std::string& name) { return std::string(QRES_CONFIG_DIR) + "/" + name; }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qres_test_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = scratch_dir(name) / "config.json";
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse_config("{\n  \"model\": {\"type\": \"dimer\",\n  }\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(Config, UnknownKeyReportsPath) {
  try {
    parse_config(R"({"model": {"type": "dimer", "couplng": 1.0}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.couplng"), std::string::npos) << e.what();
  }
}

TEST(Config, DimerDefaults) {
  const RunConfig cfg = parse_config(R"({"model": {"type": "dimer", "detuning": 130, "coupling": 100}})");
  EXPECT_NEAR(cfg.model.dimer.theta, 0.5 * std::atan(200.0 / 130.0), 1e-15);
  EXPECT_EQ(model_dim(cfg), 3);
  EXPECT_NEAR(build_observable(cfg).matrix()(2, 2).real(), 1.0, 0.0);
}

TEST(Config, StepConsistencyChecked) {
  EXPECT_THROW(
      parse_config(R"({"model": {"type": "dimer", "dephasing_rate": 50, "dt": 0.001, "eta": 0.5}})"), ConfigError);
  const RunConfig ok = parse_config(R"({"model": {"type": "dimer", "dephasing_rate": 50, "dt": 0.001}})");
  EXPECT_NEAR(ok.model.dimer.eta, std::exp(-0.05), 1e-15);
}

TEST(Config, MatrixShapeChecked) {
  EXPECT_THROW(parse_config(R"({"model": {"type": "custom", "hamiltonian": [[1, 0], [0, 0], [0, 0]]}})"),
               ConfigError);
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Cli, MissingConfigIsConfigError) {
  EXPECT_EQ(run_cli("check-config --config /nonexistent/qres.json").code, kConfigError);
  EXPECT_EQ(run_cli("sweep-theta").code, kConfigError);
}

TEST(Cli, BadKeyExitsTwo) {
  const Result r = run_cli("check-config --config " + write_temp("badkey", R"({"run": {"grid": 3}})"));
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.output.find("run.grid"), std::string::npos) << r.output;
}

TEST(Cli, RegimeMismatchExitsFour) {
  const Result r = run_cli("sweep-theta --config " + config("rabi.json"));
  EXPECT_EQ(r.code, kRegimeMismatch) << r.output;
}

TEST(Cli, SweepThetaRows) {
  const auto dir = scratch_dir("sweep");
  const Result r = run_cli("sweep-theta --config " + config("sweep_theta.json") + " --out " + dir.string());
  ASSERT_EQ(r.code, kOk) << r.output;
  const auto rows = parse_csv(read_file(dir / "sweep_theta.csv"));
  ASSERT_EQ(rows.size(), 182u);
  EXPECT_EQ(rows[0][0], "theta");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double theta = std::stod(rows[k][0]);
    EXPECT_NEAR(std::stod(rows[k][2]), 0.5 * std::abs(std::sin(2 * theta)), 1e-11);
    EXPECT_LT(std::stod(rows[k][3]), 1e-10);
  }
  EXPECT_NEAR(std::stod(rows[1][1]), 0.0, 1e-15);
  EXPECT_NEAR(std::stod(rows[1 + 45][0]), std::numbers::pi / 4, 1e-11);
  EXPECT_NEAR(std::stod(rows[1 + 45][1]), 0.5, 1e-12);
}

TEST(Cli, ByteIdenticalReruns) {
  const auto a = scratch_dir("rerun_a"), b = scratch_dir("rerun_b");
  ASSERT_EQ(run_cli("dynamics --config " + config("underdamped.json") + " --out " + a.string()).code, kOk);
  ASSERT_EQ(run_cli("dynamics --config " + config("underdamped.json") + " --out " + b.string()).code, kOk);
  EXPECT_EQ(read_file(a / "dynamics.csv"), read_file(b / "dynamics.csv"));
  EXPECT_FALSE(read_file(a / "dynamics.csv").empty());
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const std::string args = "sweep-theta --config " + config("sweep_theta.json");
  const Result one = run_cli_stdout("QRES_THREADS=1", args);
  const Result three = run_cli_stdout("QRES_THREADS=3", args);
  ASSERT_EQ(one.code, kOk);
  EXPECT_EQ(one.output, three.output);
}

TEST(Cli, DynamicsBoundChainHolds) {
  const auto dir = scratch_dir("dyn");
  const Result r = run_cli("dynamics --config " + config("overdamped.json") + " --out " + dir.string() + " --plots");
  ASSERT_EQ(r.code, kOk) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "dynamics.svg"));
  const auto rows = parse_csv(read_file(dir / "dynamics.csv"));
  ASSERT_GT(rows.size(), 2u);
  const double c0 = std::stod(rows[1][1]);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double dc = std::abs(std::stod(rows[k][1]) - c0);
    EXPECT_LE(dc, std::stod(rows[k][3]) + 1e-9);
    EXPECT_LE(std::stod(rows[k][3]), std::stod(rows[k][5]) + 1e-9);
    EXPECT_EQ(rows[k][6], "overdamped");
  }
}

TEST(Cli, ResonanceInfeasible) {
  const Result r = run_cli("bounds --config " + config("resonance_infeasible.json"));
  ASSERT_EQ(r.code, kOk) << r.output;
  EXPECT_NE(r.output.find("verdict infeasible"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("ceiling 20.0062490237"), std::string::npos) << r.output;
}

TEST(Cli, RabiIncompatible) {
  const Result r = run_cli("decompose --config " + config("rabi.json"));
  ASSERT_EQ(r.code, kOk) << r.output;
  EXPECT_NE(r.output.find("incompatible"), std::string::npos) << r.output;
}

TEST(Cli, PauliDecayCompatible) {
  const Result r = run_cli("decompose --config " + config("pauli_decay.json"));
  ASSERT_EQ(r.code, kOk) << r.output;
  EXPECT_NE(r.output.find("compatible"), std::string::npos);
  EXPECT_EQ(r.output.find("incompatible"), std::string::npos) << r.output;
}

TEST(Cli, BrokenKrausNamesResidual) {
  const Result r = run_cli("verify --config " + config("broken_kraus.json"));
  EXPECT_EQ(r.code, kInvariantFailure) << r.output;
  EXPECT_NE(r.output.find("FAIL configured kraus completeness"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("residual"), std::string::npos) << r.output;
}

TEST(Cli, HypothesisWithinBound) {
  const auto dir = scratch_dir("hyp");
  const Result r = run_cli("hypothesis --config " + config("hypothesis.json") + " --out " + dir.string());
  ASSERT_EQ(r.code, kOk) << r.output;
  EXPECT_NE(r.output.find("p_succ 0.75"), std::string::npos) << r.output;
  const auto rows = parse_csv(read_file(dir / "hypothesis.csv"));
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t k = 1; k < rows.size(); ++k)
    EXPECT_LE(std::stod(rows[k][2]), std::stod(rows[k][1]) + std::stod(rows[k][3]));
}

TEST(Cli, VerifyPasses) {
  const Result r = run_cli("verify --config " + config("verify.json") + " --seed 3");
  EXPECT_EQ(r.code, kOk) << r.output;
  EXPECT_NE(r.output.find("suites passed"), std::string::npos);
}

TEST(Cli, InProcessDispatchMatchesBinary) {
  Invocation inv;
  inv.cfg = load_config(config("sweep_theta.json"));
  std::ostringstream out, err;
  EXPECT_EQ(run_command("sweep-theta", inv, out, err), kOk);
  EXPECT_EQ(run_cli_stdout("", "sweep-theta --config " + config("sweep_theta.json")).output, out.str());
}

}  // namespace
}  // namespace qres::cli
