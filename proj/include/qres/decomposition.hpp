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

#include <vector>

#include "qres/dynamics.hpp"

namespace qres {

struct SplitChannel {
  SuperOperator free;
  SuperOperator res;
  SuperOperator g_g;        // G T G
  SuperOperator perp_perp;  // G' T G'
  SuperOperator perp_g;     // G' T G
  SuperOperator g_perp;     // G T G'
  /// Set when G is CPTP: whether the free part passes cptp_check.
  bool free_is_cptp = false;
  /// Whether the resourceful part is trace-annihilating, as it must be when T is trace preserving.
  bool res_trace_annihilating = false;
};

/// Splits T into G T G and the remainder. G' = id - G.
SplitChannel split(const SuperOperator& t, const ResourceDestroyingMap& g);
SplitChannel split_channel(const QuantumChannel& lambda, const ResourceDestroyingMap& g);
SplitChannel split_generator(const LindbladGenerator& gen, const ResourceDestroyingMap& g);

struct CapacityEquality {
  double full = 0.0;
  double res = 0.0;
  double res_tilde = 0.0;
  /// ||(L - L G) - (L - G L G)||_F.
  double map_difference = 0.0;
  bool maps_equal = false;
  bool agree = false;
};

CapacityEquality capacity_equality_check(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                                         const HermitianObservable& m);

struct CrossBlocks {
  double generating_norm = 0.0;  // ||G' T G||_F
  double activating_norm = 0.0;  // ||G T G'||_F
  double commutator_norm = 0.0;  // ||T G - G T||_F
  bool non_generating = false;
  bool non_activating = false;
  bool covariant = false;
};

CrossBlocks cross_block_flags(const SuperOperator& lambda, const ResourceDestroyingMap& g);

struct CompatibilityReport {
  std::vector<double> times;
  std::vector<double> residuals;
  /// ||d/dt L_free(t) - L_free o L_free(t)||_F by central differences.
  std::vector<double> ode_residuals;
  double max_residual = 0.0;
  bool compatible = false;
};

/// 128 uniform points on [t_start, t_end] plus the endpoints.
std::vector<double> compatibility_grid(double t_start, double t_end);
CompatibilityReport compatibility_check(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                        const std::vector<double>& times);

/// Pauli matrices and ladder operators in the basis where sigma_z |0> = |0>.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix sigma_minus();  // |0><1|
Matrix sigma_plus();   // |1><0|

/// Independent decoherence along x, y, z with the given rates.
LindbladGenerator qubit_pauli_decay(double gamma_x, double gamma_y, double gamma_z);
/// H = Omega sigma_x / 2.
LindbladGenerator qubit_rabi(double omega);

}  // namespace qres
