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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli_commands.hpp"

int main(int argc, char** argv) {
  using namespace qres::cli;
  CLI::App app{"qres: resource impact, rates and bounds for quantum channels"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool plots = false;

  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file (JSON)")->required();
    if (name != "check-config") {
      sub->add_option("--out", out_dir, "directory for CSV, SVG and report files");
      sub->add_option("--seed", seed, "overrides run.seed");
      sub->add_flag("--plots", plots, "also write SVG line plots (needs --out)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Invocation inv;
  try {
    inv.cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  if (seed) inv.cfg.run.seed = *seed;
  if (!out_dir.empty()) inv.out_dir = out_dir;
  inv.plots = plots;
  return run_command(command, inv, std::cout, std::cerr);
}
