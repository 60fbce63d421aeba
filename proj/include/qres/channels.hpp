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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qres/operator_core.hpp"

namespace qres {

/// Linear map on d x d matrices, stored as its d^2 x d^2 Liouville matrix.
class SuperOperator {
 public:
  SuperOperator(Index dim, Matrix liouville);

  static SuperOperator identity(Index dim);
  static SuperOperator zero(Index dim);
  /// Builds the Liouville matrix column by column from the action on E_ij.
  static SuperOperator from_action(Index dim, const std::function<Matrix(const Matrix&)>& action);
  /// X -> sum_k A_k X B_k.
  static SuperOperator sandwich(const std::vector<std::pair<Matrix, Matrix>>& terms);

  Index dim() const { return dim_; }
  const Matrix& liouville() const { return l_; }

  Matrix apply(const Matrix& x) const;
  /// Hilbert-Schmidt adjoint.
  SuperOperator adjoint() const;
  Matrix adjoint_apply(const Matrix& x) const;

  SuperOperator operator+(const SuperOperator& o) const;
  SuperOperator operator-(const SuperOperator& o) const;
  /// Composition: (a * b)(X) = a(b(X)).
  SuperOperator operator*(const SuperOperator& o) const;
  SuperOperator operator*(double s) const;

  double frobenius_norm() const { return l_.norm(); }

 private:
  Index dim_;
  Matrix l_;
};

SuperOperator operator*(double s, const SuperOperator& a);

/// Unnormalized Choi matrix sum_ij Phi(E_ij) (x) E_ij.
Matrix choi_matrix(const SuperOperator& phi);

struct CptpReport {
  bool completely_positive = false;
  bool trace_preserving = false;
  double min_choi_eigenvalue = 0.0;
  double trace_residual = 0.0;
  bool passed() const { return completely_positive && trace_preserving; }
};

CptpReport cptp_check(const SuperOperator& phi, double tolerance = tol::kSpectral);

class QuantumChannel {
 public:
  /// Throws ValidationError reporting the completeness residual.
  static QuantumChannel from_kraus(std::vector<Matrix> kraus, std::string label = "kraus");
  static QuantumChannel from_superoperator(const SuperOperator& s, std::string label = "superop",
                                           double tolerance = tol::kSpectral);
  static QuantumChannel unitary(const Matrix& u, std::string label = "unitary");
  static QuantumChannel identity(Index dim);

  Index dim() const { return superop_.dim(); }
  const std::string& label() const { return label_; }
  const SuperOperator& superop() const { return superop_; }
  const std::optional<std::vector<Matrix>>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& x) const { return superop_.apply(x); }
  DensityOperator apply(const DensityOperator& rho) const;
  Matrix adjoint_apply(const Matrix& x) const { return superop_.adjoint_apply(x); }
  HermitianObservable adjoint_apply(const HermitianObservable& m) const;

 private:
  QuantumChannel(SuperOperator s, std::optional<std::vector<Matrix>> kraus, std::string label);

  SuperOperator superop_;
  std::optional<std::vector<Matrix>> kraus_;
  std::string label_;
};

/// second after first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);
QuantumChannel mix(std::span<const double> weights, std::span<const QuantumChannel> channels);

/// Random channel from a Haar-random Stinespring isometry.
QuantumChannel random_channel(Sampler& sampler, Index dim, Index kraus_rank);

/// Applies s (x) id to an operator on C^d (x) C^d.
Matrix apply_with_ancilla(const SuperOperator& s, const Matrix& x);
Matrix adjoint_apply_with_ancilla(const SuperOperator& s, const Matrix& x);

struct NormEstimate {
  double value = 0.0;
  Vector maximizer;
  int restarts = 0;
};

/// max over unit vectors psi of ||s(psi psi^dagger)||_1.
///
/// Equals the induced trace norm on Hermitian inputs when s preserves
/// hermiticity. The result is a lower estimate from monotone ascent with
/// restarts; the first restarts use basis vectors and pairwise
/// superpositions.
NormEstimate induced_one_norm(const SuperOperator& s, int restarts = 32, std::uint64_t seed = 7);

struct DiamondReport {
  double lower_estimate = 0.0;
  /// d times the induced 1->1 estimate; heuristic, not certified.
  double surrogate_upper = 0.0;
  /// Trace norm of the Choi matrix; a certified upper bound.
  double guaranteed_upper = 0.0;
};

DiamondReport diamond_upper(const SuperOperator& s, int restarts = 32, std::uint64_t seed = 7);

}  // namespace qres
