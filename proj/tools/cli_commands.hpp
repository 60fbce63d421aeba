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

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cli_config.hpp"

namespace qres::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kInvariantFailure = 3, kRegimeMismatch = 4 };

struct Invocation {
  RunConfig cfg;
  std::optional<std::string> out_dir;
  bool plots = false;
};

/// Locale-independent shortest form with 12 significant digits.
std::string format_number(double x);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& os) const;
  /// Line plot of the numeric columns against the first one.
  void write_svg(std::ostream& os, const std::string& title) const;
};

/// Worker count: QRES_THREADS when set, else the hardware concurrency.
unsigned worker_count();
/// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

int cmd_sweep_theta(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_dynamics(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_bounds(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_decompose(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_hypothesis(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_verify(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_check_config(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Dispatches by name and maps library exceptions to exit codes.
int run_command(const std::string& name, const Invocation& inv, std::ostream& out, std::ostream& err);

const std::vector<std::string>& command_names();

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

/// Randomized invariant suites over every module plus the configured model.
std::vector<SuiteResult> run_verify_suites(const RunConfig& cfg, std::uint64_t seed, int samples);

}  // namespace qres::cli
