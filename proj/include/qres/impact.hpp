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
#include <string>
#include <vector>

#include "qres/resource_maps.hpp"

namespace qres {

/// Arbitrary, possibly non-linear, map from states to states.
using StateMap = std::function<Matrix(const Matrix&)>;

/// Yield change Tr[M (L(rho) - L(G(rho)))].
double delta_yield(const SuperOperator& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m,
                   const Matrix& rho);
double delta_yield(const SuperOperator& lambda, const StateMap& g, const HermitianObservable& m, const Matrix& rho);

struct ImpactOperator {
  HermitianObservable b;
  std::string channel_label;
  std::string map_label;
};

/// B = (id - G^dagger)(L^dagger(M)).
ImpactOperator impact_operator(const QuantumChannel& lambda, const ResourceDestroyingMap& g,
                               const HermitianObservable& m);
Matrix impact_matrix(const SuperOperator& lambda, const ResourceDestroyingMap& g, const Matrix& m);

enum class Method { spectral, sampled };

struct ImpactResult {
  double capacity = 0.0;
  double plus = 0.0;
  double minus = 0.0;
  DensityOperator optimizer = DensityOperator::maximally_mixed(1);
  Method method = Method::spectral;
  /// lambda_max(B) and -lambda_min(B) agree within 1e-12.
  bool degenerate_extremes = false;
  /// Frobenius norm of the part of L^dagger(M) outside the image of G^dagger.
  double vanishing_residual = 0.0;
  bool vanishes = false;
};

ImpactResult capacity(const SuperOperator& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m);
ImpactResult capacity(const QuantumChannel& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m);
/// Spectral evaluation from a precomputed impact matrix.
ImpactResult capacity_of_impact(const Matrix& b);

/// Lower estimate from n pure and n mixed random inputs.
ImpactResult capacity_sampled(const SuperOperator& lambda, const StateMap& g, const HermitianObservable& m,
                              int n_samples, Sampler& sampler);

/// sup_rho |Tr[M L(rho)]| - max_k |Tr[M L(sigma_k)]|.
double pi_advantage(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                    const HermitianObservable& m);

enum class Divergence { trace_distance, relative_entropy };

double divergence(Divergence kind, const Matrix& rho, const Matrix& sigma);

struct ClosestFree {
  Matrix rho;
  Matrix closest;
  RealVector weights;
  double distance = 0.0;
  /// max over the near-minimizer window of |Tr[M L(rho - pi(rho))]|.
  double contribution = 0.0;
};

struct ProjectedResult {
  double value = 0.0;
  std::vector<ClosestFree> samples;
};

struct ProjectedOptions {
  int grid_resolution = 200;
  int n_samples = 100;
  double window = 1e-9;
  std::uint64_t seed = 1;
};

/// Nearest free state over the simplex of extreme points, by grid search
/// followed by Nelder-Mead.
ClosestFree closest_free_state(const Matrix& rho, const std::vector<DensityOperator>& free_extreme_points,
                               Divergence kind, int grid_resolution);

ProjectedResult projected_capacity(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                                   Divergence kind, const HermitianObservable& m, const ProjectedOptions& opts);
/// Same functional for the input states provided.
ProjectedResult projected_capacity(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                                   Divergence kind, const HermitianObservable& m, const std::vector<Matrix>& inputs,
                                   const ProjectedOptions& opts);

struct GeometryReport {
  double support = 0.0;
  double capacity = 0.0;
  double max_slab = 0.0;
  bool polar_member = false;
  bool slab_member = false;
  bool on_boundary = false;
  bool consistent = false;
};

GeometryReport geometry_checks(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                               const HermitianObservable& m, int n_samples, Sampler& sampler);

struct HypothesisReport {
  double p0 = 0.0;
  double p1 = 0.0;
  double bias = 0.0;
  double p_succ = 0.5;
  int n = 0;
  int trials = 0;
  double hoeffding_bound = 1.0;
  double empirical_error = 0.0;
  double statistical_slack = 0.0;
  bool within_bound() const { return empirical_error <= hoeffding_bound + statistical_slack; }
};

/// Decides between rho (H1) and G(rho) (H0) from n shots of the binary
/// measurement {M, I - M} with the midpoint threshold rule.
HypothesisReport hypothesis_test(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                                 const HermitianObservable& m, const DensityOperator& rho, int n, int trials,
                                 Sampler& sampler);

}  // namespace qres
