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

#include "qres/operator_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace qres {

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw ValidationError(os.str());
  }
  if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

void require_hermitian(const Matrix& a, const char* what) {
  require_square(a, what);
  const double asym = max_asymmetry(a);
  if (asym > tol::kAlgebraic * entry_scale(a)) {
    std::ostringstream os;
    os << what << ": not Hermitian, max |A - A^dagger| = " << asym;
    throw ValidationError(os.str());
  }
}

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

double max_asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double entry_scale(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  return std::max(1.0, a.cwiseAbs().maxCoeff());
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

HermitianObservable::HermitianObservable(const Matrix& m, bool povm_element)
    : povm_(povm_element) {
  require_hermitian(m, "HermitianObservable");
  m_ = hermitian_part(m);
  if (povm_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -tol::kAlgebraic || hi > 1.0 + tol::kAlgebraic) {
      std::ostringstream os;
      os << "POVM element spectrum [" << lo << ", " << hi << "] outside [0, 1]";
      throw ValidationError(os.str());
    }
  }
}

DensityOperator::DensityOperator(const Matrix& rho) {
  require_hermitian(rho, "DensityOperator");
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > tol::kAlgebraic) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag()
       << "i differs from 1 by " << std::abs(tr - 1.0);
    throw ValidationError(os.str());
  }
  rho_ = hermitian_part(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol::kPositivity) {
    std::ostringstream os;
    os << "DensityOperator: minimum eigenvalue " << lo << " below -" << tol::kPositivity;
    throw ValidationError(os.str());
  }
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0) || !psi.allFinite()) throw ValidationError("pure state: zero or non-finite vector");
  const Vector u = psi / n;
  return DensityOperator(u * u.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Eigensystem eig_hermitian(const Matrix& a) {
  require_hermitian(a, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver did not converge");
  const Index n = a.rows();
  Eigensystem out{RealVector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Eigensystem eig_hermitian(const HermitianObservable& a) { return eig_hermitian(a.matrix()); }

SchattenNorms schatten_norms(const Matrix& a) {
  if (a.size() == 0) throw ValidationError("schatten_norms: empty matrix");
  if (!a.allFinite()) throw ValidationError("schatten_norms: non-finite entry");
  if (a.rows() == a.cols() && max_asymmetry(a) <= tol::kAlgebraic * entry_scale(a)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    const RealVector ev = es.eigenvalues().cwiseAbs();
    return {ev.maxCoeff(), ev.sum()};
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const RealVector& sv = svd.singularValues();
  return {sv(0), sv.sum()};
}

double op_norm(const Matrix& a) { return schatten_norms(a).op; }
double trace_norm(const Matrix& a) { return schatten_norms(a).trace; }

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("hs_inner: shape mismatch");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

Vector vec(const Matrix& a) {
  Vector v(a.size());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

Matrix unvec(const Vector& v) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size() || d == 0) {
    throw ValidationError("unvec: length " + std::to_string(v.size()) + " is not a perfect square");
  }
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = v(i * d + j);
  return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matrix_exp(const Matrix& a_in, double t) {
  require_square(a_in, "matrix_exp");
  const Index n = a_in.rows();
  const Matrix a = t * a_in;
  const Matrix id = Matrix::Identity(n, n);
  const double norm = one_norm(a);

  static constexpr std::array<double, 4> theta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                  9.504178996162932e-1, 2.097847961257068e0};
  static constexpr std::array<std::array<double, 10>, 4> low = {{
      {120., 60., 12., 1.},
      {30240., 15120., 3360., 420., 30., 1.},
      {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.},
      {17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160., 110880., 3960.,
       90., 1.},
  }};
  static constexpr std::array<int, 4> degree = {3, 5, 7, 9};

  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (norm > theta[k]) continue;
    const auto& b = low[k];
    const Matrix a2 = a * a;
    Matrix power = id;
    Matrix u_sum = Matrix::Zero(n, n);
    Matrix v_sum = Matrix::Zero(n, n);
    for (int j = 0; j <= degree[k]; j += 2) {
      v_sum += b[j] * power;
      u_sum += b[j + 1] * power;
      power = power * a2;
    }
    const Matrix u = a * u_sum;
    return (v_sum - u).partialPivLu().solve(v_sum + u);
  }

  static constexpr std::array<double, 14> b = {
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,    33522128640.,
      1323241920.,        40840800.,          960960.,          16380.,
      182.,               1.};
  constexpr double theta13 = 5.371920351148152;
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const Matrix as = a / std::ldexp(1.0, s);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

double Sampler::uniform() { return uniform_(engine_); }
double Sampler::normal() { return normal_(engine_); }
Complex Sampler::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Matrix Sampler::ginibre(Index rows, Index cols) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

Vector Sampler::pure_state(Index dim) {
  Vector psi = ginibre(dim, 1).col(0);
  return psi / psi.norm();
}

DensityOperator Sampler::mixed_state(Index dim) {
  const Matrix g = ginibre(dim, dim);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(hermitian_part(rho));
}

Matrix Sampler::unitary(Index dim) {
  const Matrix g = ginibre(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

HermitianObservable Sampler::hermitian(Index dim) {
  const Matrix g = ginibre(dim, dim);
  return HermitianObservable(hermitian_part(g));
}

HermitianObservable Sampler::povm_element(Index dim) {
  const Matrix u = unitary(dim);
  RealVector spec(dim);
  for (Index k = 0; k < dim; ++k) spec(k) = uniform();
  return HermitianObservable(hermitian_part(u * spec.cast<Complex>().asDiagonal() * u.adjoint()), true);
}

}  // namespace qres
