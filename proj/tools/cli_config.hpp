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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qres/decomposition.hpp"
#include "qres/donor_acceptor.hpp"

namespace qres::cli {

/// Malformed or invalid configuration. The message names the line or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelType { dimer, custom };

struct ModelConfig {
  ModelType type = ModelType::dimer;
  dimer::Params dimer;
  /// When set, eta and p_j are checked against the rates over this step.
  std::optional<double> dt;
  std::optional<Matrix> hamiltonian;
  std::vector<JumpOperator> jumps;
  std::vector<Matrix> kraus;
};

struct MapConfig {
  std::string kind = "dephasing";
  std::optional<Matrix> basis;
  std::vector<Matrix> unitaries;
  std::optional<Matrix> sigma;
};

struct ObservableConfig {
  std::optional<dimer::ObservableCoeffs> coeffs;
  std::optional<Matrix> matrix;
  bool povm = false;
};

struct RunOptions {
  double t_start = 0.0;
  double t_end = 1.0;
  int grid_points = 200;
  std::uint64_t seed = 1;
  int samples = 200;
  double target = 0.0;
  int theta_points = 181;
  std::vector<int> hypothesis_n{1, 10, 100, 1000};
  int trials = 100000;
  std::optional<Matrix> state;
  int restarts = 32;
  bool inject_broken_kraus = false;
};

struct RunConfig {
  ModelConfig model;
  MapConfig map;
  ObservableConfig observable;
  RunOptions run;
  std::string source;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);

/// Builds every artifact once and reports the first invariant violation as a ConfigError.
void validate_config(const RunConfig& cfg);

Index model_dim(const RunConfig& cfg);
LindbladGenerator build_generator(const RunConfig& cfg);
QuantumChannel build_channel(const RunConfig& cfg);
ResourceDestroyingMap build_map(const RunConfig& cfg);
HermitianObservable build_observable(const RunConfig& cfg);
/// Coefficients of a block-form observable; empty for a general matrix.
std::optional<dimer::ObservableCoeffs> observable_coeffs(const RunConfig& cfg);

}  // namespace qres::cli
