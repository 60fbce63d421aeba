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

#include "qres/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace qres {

namespace {

using MatrixMap = std::function<Matrix(const Matrix&)>;

Matrix polar_factor(const Matrix& x) {
  if (max_asymmetry(x) <= tol::kAlgebraic * entry_scale(x)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x));
    RealVector sign = es.eigenvalues().unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    return es.eigenvectors() * sign.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  }
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Vector top_eigenvector(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors().col(h.rows() - 1);
}

double value_at(const MatrixMap& apply, const Vector& psi) {
  return trace_norm(apply(psi * psi.adjoint()));
}

// Conditional-gradient ascent over pure states. Each step maximizes the
// linearization Re Tr[W^dagger s(P)] with W the polar factor of s(P), so the
// objective never decreases.
std::pair<double, Vector> ascend(const MatrixMap& apply, const MatrixMap& adjoint, Vector psi) {
  double f = value_at(apply, psi);
  for (int iter = 0; iter < 500; ++iter) {
    const Matrix w = polar_factor(apply(psi * psi.adjoint()));
    const Vector next = top_eigenvector(hermitian_part(adjoint(w)));
    const double g = value_at(apply, next);
    if (g <= f + 1e-15 * std::max(1.0, f)) break;
    f = g;
    psi = next;
  }
  return {f, psi};
}

std::vector<Vector> structured_starts(Index n) {
  std::vector<Vector> starts;
  for (Index i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      Vector a = Vector::Zero(n);
      a(i) = 1.0;
      a(j) = 1.0;
      starts.push_back(a / std::sqrt(2.0));
      a(j) = Complex(0.0, 1.0);
      starts.push_back(a / std::sqrt(2.0));
    }
  }
  return starts;
}

NormEstimate maximize(const MatrixMap& apply, const MatrixMap& adjoint, Index n,
                      std::vector<Vector> starts, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw ValidationError("induced norm: restarts must be positive");
  Sampler sampler(seed);
  if (static_cast<int>(starts.size()) > restarts) starts.resize(restarts);
  while (static_cast<int>(starts.size()) < restarts) starts.push_back(sampler.pure_state(n));
  NormEstimate best;
  best.value = -1.0;
  for (const Vector& s : starts) {
    auto [f, psi] = ascend(apply, adjoint, s);
    if (f > best.value) {
      best.value = f;
      best.maximizer = psi;
    }
  }
  best.restarts = restarts;
  return best;
}

}  // namespace

SuperOperator::SuperOperator(Index dim, Matrix liouville) : dim_(dim), l_(std::move(liouville)) {
  if (dim <= 0 || l_.rows() != dim * dim || l_.cols() != dim * dim) {
    std::ostringstream os;
    os << "SuperOperator: Liouville matrix " << l_.rows() << "x" << l_.cols()
       << " does not match dimension " << dim;
    throw ValidationError(os.str());
  }
  if (!l_.allFinite()) throw ValidationError("SuperOperator: non-finite entry");
}

SuperOperator SuperOperator::identity(Index dim) {
  return SuperOperator(dim, Matrix::Identity(dim * dim, dim * dim));
}

SuperOperator SuperOperator::zero(Index dim) {
  return SuperOperator(dim, Matrix::Zero(dim * dim, dim * dim));
}

SuperOperator SuperOperator::from_action(Index dim, const std::function<Matrix(const Matrix&)>& action) {
  Matrix l(dim * dim, dim * dim);
  for (Index k = 0; k < dim; ++k) {
    for (Index m = 0; m < dim; ++m) {
      Matrix e = Matrix::Zero(dim, dim);
      e(k, m) = 1.0;
      const Matrix out = action(e);
      if (out.rows() != dim || out.cols() != dim) throw ValidationError("from_action: bad output shape");
      l.col(k * dim + m) = vec(out);
    }
  }
  return SuperOperator(dim, l);
}

SuperOperator SuperOperator::sandwich(const std::vector<std::pair<Matrix, Matrix>>& terms) {
  if (terms.empty()) throw ValidationError("sandwich: no terms");
  const Index d = terms.front().first.rows();
  Matrix l = Matrix::Zero(d * d, d * d);
  for (const auto& [a, b] : terms) {
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) {
      throw ValidationError("sandwich: operator shape mismatch");
    }
    l += kron(a, b.transpose());
  }
  return SuperOperator(d, l);
}

Matrix SuperOperator::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw ValidationError("SuperOperator::apply: shape mismatch");
  return unvec(l_ * vec(x));
}

SuperOperator SuperOperator::adjoint() const { return SuperOperator(dim_, l_.adjoint()); }

Matrix SuperOperator::adjoint_apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw ValidationError("SuperOperator::adjoint_apply: shape mismatch");
  }
  return unvec(l_.adjoint() * vec(x));
}

SuperOperator SuperOperator::operator+(const SuperOperator& o) const {
  if (o.dim_ != dim_) throw ValidationError("SuperOperator: dimension mismatch");
  return SuperOperator(dim_, l_ + o.l_);
}

SuperOperator SuperOperator::operator-(const SuperOperator& o) const {
  if (o.dim_ != dim_) throw ValidationError("SuperOperator: dimension mismatch");
  return SuperOperator(dim_, l_ - o.l_);
}

SuperOperator SuperOperator::operator*(const SuperOperator& o) const {
  if (o.dim_ != dim_) throw ValidationError("SuperOperator: dimension mismatch");
  return SuperOperator(dim_, l_ * o.l_);
}

SuperOperator SuperOperator::operator*(double s) const { return SuperOperator(dim_, s * l_); }

SuperOperator operator*(double s, const SuperOperator& a) { return a * s; }

Matrix choi_matrix(const SuperOperator& phi) {
  const Index d = phi.dim();
  Matrix j = Matrix::Zero(d * d, d * d);
  for (Index k = 0; k < d; ++k) {
    for (Index m = 0; m < d; ++m) {
      Matrix e = Matrix::Zero(d, d);
      e(k, m) = 1.0;
      j += kron(phi.apply(e), e);
    }
  }
  return j;
}

CptpReport cptp_check(const SuperOperator& phi, double tolerance) {
  const Index d = phi.dim();
  CptpReport r;
  const Matrix j = choi_matrix(phi);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(j), Eigen::EigenvaluesOnly);
  r.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  const double asym = max_asymmetry(j);
  r.completely_positive = asym <= tolerance && r.min_choi_eigenvalue >= -tolerance;
  double residual = 0.0;
  for (Index k = 0; k < d; ++k) {
    for (Index m = 0; m < d; ++m) {
      Matrix e = Matrix::Zero(d, d);
      e(k, m) = 1.0;
      const Complex tr = phi.apply(e).trace();
      residual = std::max(residual, std::abs(tr - (k == m ? 1.0 : 0.0)));
    }
  }
  r.trace_residual = residual;
  r.trace_preserving = residual <= tolerance;
  return r;
}

QuantumChannel::QuantumChannel(SuperOperator s, std::optional<std::vector<Matrix>> kraus, std::string label)
    : superop_(std::move(s)), kraus_(std::move(kraus)), label_(std::move(label)) {}

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus, std::string label) {
  if (kraus.empty()) throw ValidationError("from_kraus: empty Kraus set");
  const Index d = kraus.front().rows();
  Matrix completeness = Matrix::Zero(d, d);
  std::vector<std::pair<Matrix, Matrix>> terms;
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw ValidationError("from_kraus: Kraus operators must be square and equal-sized");
    if (!k.allFinite()) throw ValidationError("from_kraus: non-finite entry");
    completeness += k.adjoint() * k;
    terms.emplace_back(k, k.adjoint());
  }
  const double residual = (completeness - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > tol::kAlgebraic) {
    std::ostringstream os;
    os << "from_kraus[" << label << "]: completeness residual max |sum K^dagger K - I| = " << residual;
    throw ValidationError(os.str());
  }
  return QuantumChannel(SuperOperator::sandwich(terms), std::move(kraus), std::move(label));
}

QuantumChannel QuantumChannel::from_superoperator(const SuperOperator& s, std::string label, double tolerance) {
  const CptpReport r = cptp_check(s, tolerance);
  if (!r.passed()) {
    std::ostringstream os;
    os << "from_superoperator[" << label << "]: not CPTP (min Choi eigenvalue " << r.min_choi_eigenvalue
       << ", trace residual " << r.trace_residual << ")";
    throw ValidationError(os.str());
  }
  return QuantumChannel(s, std::nullopt, std::move(label));
}

QuantumChannel QuantumChannel::unitary(const Matrix& u, std::string label) {
  return from_kraus({u}, std::move(label));
}

QuantumChannel QuantumChannel::identity(Index dim) {
  return from_kraus({Matrix::Identity(dim, dim)}, "identity");
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
  Matrix out = hermitian_part(superop_.apply(rho.matrix()));
  const double tr = out.trace().real();
  if (std::abs(tr - 1.0) <= tol::kSpectral) out /= tr;
  return DensityOperator(out);
}

HermitianObservable QuantumChannel::adjoint_apply(const HermitianObservable& m) const {
  return HermitianObservable(hermitian_part(superop_.adjoint_apply(m.matrix())));
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.dim() != first.dim()) throw ValidationError("compose: dimension mismatch");
  const std::string label = second.label() + "*" + first.label();
  if (second.kraus() && first.kraus()) {
    std::vector<Matrix> ks;
    for (const Matrix& a : *second.kraus())
      for (const Matrix& b : *first.kraus()) ks.push_back(a * b);
    return QuantumChannel::from_kraus(std::move(ks), label);
  }
  return QuantumChannel::from_superoperator(second.superop() * first.superop(), label);
}

QuantumChannel mix(std::span<const double> weights, std::span<const QuantumChannel> channels) {
  if (weights.size() != channels.size() || channels.empty()) {
    throw ValidationError("mix: weights and channels must be non-empty and of equal length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw ValidationError("mix: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > tol::kAlgebraic) throw ValidationError("mix: weights must sum to 1");
  const Index d = channels.front().dim();
  bool all_kraus = true;
  for (const auto& c : channels) {
    if (c.dim() != d) throw ValidationError("mix: dimension mismatch");
    all_kraus = all_kraus && c.kraus().has_value();
  }
  if (all_kraus) {
    std::vector<Matrix> ks;
    for (std::size_t i = 0; i < channels.size(); ++i) {
      if (weights[i] == 0.0) continue;
      for (const Matrix& k : *channels[i].kraus()) ks.push_back(std::sqrt(weights[i]) * k);
    }
    return QuantumChannel::from_kraus(std::move(ks), "mixture");
  }
  SuperOperator s = SuperOperator::zero(d);
  for (std::size_t i = 0; i < channels.size(); ++i) s = s + weights[i] * channels[i].superop();
  return QuantumChannel::from_superoperator(s, "mixture");
}

QuantumChannel random_channel(Sampler& sampler, Index dim, Index kraus_rank) {
  if (dim < 1 || kraus_rank < 1) throw ValidationError("random_channel: bad dimensions");
  const Matrix g = sampler.ginibre(dim * kraus_rank, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix v = qr.householderQ() * Matrix::Identity(dim * kraus_rank, dim);
  std::vector<Matrix> ks;
  for (Index k = 0; k < kraus_rank; ++k) ks.push_back(v.block(k * dim, 0, dim, dim));
  return QuantumChannel::from_kraus(std::move(ks), "random");
}

Matrix apply_with_ancilla(const SuperOperator& s, const Matrix& x) {
  const Index d = s.dim();
  if (x.rows() != d * d || x.cols() != d * d) throw ValidationError("apply_with_ancilla: shape mismatch");
  const Matrix& l = s.liouville();
  Matrix y = Matrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      Vector block(d * d);
      for (Index k = 0; k < d; ++k)
        for (Index m = 0; m < d; ++m) block(k * d + m) = x(k * d + a, m * d + b);
      const Vector out = l * block;
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) y(i * d + a, j * d + b) = out(i * d + j);
    }
  }
  return y;
}

Matrix adjoint_apply_with_ancilla(const SuperOperator& s, const Matrix& x) {
  return apply_with_ancilla(s.adjoint(), x);
}

NormEstimate induced_one_norm(const SuperOperator& s, int restarts, std::uint64_t seed) {
  const MatrixMap apply = [&s](const Matrix& x) { return s.apply(x); };
  const MatrixMap adjoint = [&s](const Matrix& x) { return s.adjoint_apply(x); };
  return maximize(apply, adjoint, s.dim(), structured_starts(s.dim()), restarts, seed);
}

DiamondReport diamond_upper(const SuperOperator& s, int restarts, std::uint64_t seed) {
  const Index d = s.dim();
  DiamondReport r;
  const NormEstimate plain = induced_one_norm(s, restarts, seed);
  const MatrixMap apply = [&s](const Matrix& x) { return apply_with_ancilla(s, x); };
  const SuperOperator adj = s.adjoint();
  const MatrixMap adjoint = [&adj](const Matrix& x) { return apply_with_ancilla(adj, x); };
  Vector omega = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Vector> starts{omega};
  for (Index i = 0; i < d * d; ++i) starts.push_back(Vector::Unit(d * d, i));
  const NormEstimate extended = maximize(apply, adjoint, d * d, starts, restarts, seed + 1);
  r.lower_estimate = std::max(plain.value, extended.value);
  r.surrogate_upper = static_cast<double>(d) * plain.value;
  r.guaranteed_upper = trace_norm(choi_matrix(s));
  return r;
}

}  // namespace qres
