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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qres {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kSpectral = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kExponential = 1e-9;
}  // namespace tol

/// Malformed input: wrong shape, non-Hermitian, not a state, not CPTP.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A routine was called outside the parameter regime it is defined for.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest entry of |A - A^dagger|.
double max_asymmetry(const Matrix& a);

/// Largest entry modulus, at least 1. Used to scale absolute tolerances.
double entry_scale(const Matrix& a);

/// Hermitian operator, optionally restricted to 0 <= M <= I.
class HermitianObservable {
 public:
  explicit HermitianObservable(const Matrix& m, bool povm_element = false);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  bool is_povm_element() const { return povm_; }

 private:
  Matrix m_;
  bool povm_;
};

/// Unit-trace positive semidefinite operator.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& rho);
  static DensityOperator pure(const Vector& psi);
  static DensityOperator maximally_mixed(Index dim);

  const Matrix& matrix() const { return rho_; }
  Index dim() const { return rho_.rows(); }

 private:
  Matrix rho_;
};

struct Eigensystem {
  RealVector values;  // descending
  Matrix vectors;     // columns
};

/// Throws ValidationError naming the asymmetry if `a` is not Hermitian.
Eigensystem eig_hermitian(const Matrix& a);
Eigensystem eig_hermitian(const HermitianObservable& a);

struct SchattenNorms {
  double op;
  double trace;
};

SchattenNorms schatten_norms(const Matrix& a);
double op_norm(const Matrix& a);
double trace_norm(const Matrix& a);

Complex hs_inner(const Matrix& a, const Matrix& b);

/// Row-stacking: vec(A X B) = kron(A, B^T) vec(X).
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v);

Matrix kron(const Matrix& a, const Matrix& b);

/// exp(t A) by Pade scaling and squaring.
Matrix matrix_exp(const Matrix& a, double t = 1.0);

/// Hermitian part (A + A^dagger) / 2.
Matrix hermitian_part(const Matrix& a);

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  Complex complex_normal();
  Matrix ginibre(Index rows, Index cols);

  Vector pure_state(Index dim);
  DensityOperator mixed_state(Index dim);
  /// Haar-random unitary.
  Matrix unitary(Index dim);
  /// GUE-like Hermitian matrix with unit-scale entries.
  HermitianObservable hermitian(Index dim);
  /// Spectrum uniform in [0, 1] with Haar eigenbasis.
  HermitianObservable povm_element(Index dim);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qres
