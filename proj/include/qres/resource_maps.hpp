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

#include <string>
#include <vector>

#include "qres/channels.hpp"

namespace qres {

enum class MapKind { dephasing, twirl, replacement, custom };

/// Idempotent linear map G whose image is the free set.
class ResourceDestroyingMap {
 public:
  /// Throws ValidationError if G is not idempotent within 1e-10.
  static ResourceDestroyingMap custom(const SuperOperator& g, std::vector<DensityOperator> free_extreme_points,
                                      std::string label = "custom");

  Index dim() const { return g_.dim(); }
  MapKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const SuperOperator& superop() const { return g_; }
  bool self_adjoint() const { return self_adjoint_; }
  bool cptp() const { return cptp_; }
  /// Empty when the free set has no finite list of extreme points.
  const std::vector<DensityOperator>& free_extreme_points() const { return extreme_; }

  Matrix apply(const Matrix& x) const { return g_.apply(x); }
  Matrix adjoint_apply(const Matrix& x) const { return g_.adjoint_apply(x); }
  /// X - G^dagger(X).
  Matrix filter(const Matrix& x) const { return x - g_.adjoint_apply(x); }

 private:
  ResourceDestroyingMap(SuperOperator g, MapKind kind, std::vector<DensityOperator> extreme, std::string label);

  friend ResourceDestroyingMap make_dephasing(const Matrix& basis);
  friend ResourceDestroyingMap make_twirl(const std::vector<Matrix>& unitaries);
  friend ResourceDestroyingMap make_replacement(const DensityOperator& sigma);

  SuperOperator g_;
  MapKind kind_;
  std::vector<DensityOperator> extreme_;
  std::string label_;
  bool self_adjoint_ = false;
  bool cptp_ = false;
};

/// Dephasing in an orthonormal basis, given as columns.
ResourceDestroyingMap make_dephasing(const Matrix& basis);
ResourceDestroyingMap make_dephasing(Index dim);
/// Group average over unitaries closed under multiplication up to phase.
ResourceDestroyingMap make_twirl(const std::vector<Matrix>& unitaries);
ResourceDestroyingMap make_replacement(const DensityOperator& sigma);

/// max over pure states of ||rho - G(rho)||_1.
NormEstimate resource_radius(const ResourceDestroyingMap& g, int restarts = 32, std::uint64_t seed = 11);

struct FreeSubspaces {
  /// Orthonormal Hermitian basis of span{rho - G(rho)}.
  std::vector<Matrix> resourceful;
  /// Orthonormal Hermitian basis of its orthogonal complement.
  std::vector<Matrix> complement;
};

FreeSubspaces subspaces(const ResourceDestroyingMap& g);

/// Frobenius norm of the projection of a Hermitian X onto span{rho - G(rho)}.
double resourceful_component(const FreeSubspaces& s, const Matrix& x);

struct RdmReport {
  double idempotence_residual = 0.0;
  double fixed_point_residual = 0.0;
  double image_residual = 0.0;
  double linearity_residual = 0.0;
  bool idempotent = false;
  bool fixes_free_states = false;
  bool image_is_free = false;
  bool linear = false;
  bool passed() const { return idempotent && fixes_free_states && image_is_free && linear; }
};

/// Randomized checks of the defining properties. When no extreme points are
/// given, image membership is tested as G(G(rho)) = G(rho).
RdmReport verify_rdm(const SuperOperator& g, const std::vector<DensityOperator>& free_extreme_points,
                     int samples, std::uint64_t seed);
RdmReport verify_rdm(const ResourceDestroyingMap& g, int samples, std::uint64_t seed);

/// Trace distance from x to the convex hull of the points, evaluated at the
/// Frobenius-nearest hull point.
double hull_trace_distance(const Matrix& x, const std::vector<DensityOperator>& points);

/// Orthonormal basis of d x d Hermitian matrices.
std::vector<Matrix> hermitian_basis(Index dim);

}  // namespace qres
