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

#include "qres/resource_maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qres {

namespace {

constexpr double kIdempotence = 1e-10;
constexpr double kImageMembership = 1e-8;

double relative_residual(const SuperOperator& a, const SuperOperator& b) {
  return (a.liouville() - b.liouville()).norm() / std::max(1.0, b.frobenius_norm());
}

Index superop_rank(const SuperOperator& g) {
  Eigen::JacobiSVD<Matrix> svd(g.liouville());
  const RealVector& sv = svd.singularValues();
  Index r = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-10 * std::max(1.0, sv(0))) ++r;
  return r;
}

RealVector real_coordinates(const Matrix& x) {
  RealVector out(2 * x.size());
  for (Index k = 0; k < x.size(); ++k) {
    out(2 * k) = x.data()[k].real();
    out(2 * k + 1) = x.data()[k].imag();
  }
  return out;
}

}  // namespace

ResourceDestroyingMap::ResourceDestroyingMap(SuperOperator g, MapKind kind, std::vector<DensityOperator> extreme,
                                             std::string label)
    : g_(std::move(g)), kind_(kind), extreme_(std::move(extreme)), label_(std::move(label)) {
  const double idem = relative_residual(g_ * g_, g_);
  if (idem > kIdempotence) {
    std::ostringstream os;
    os << "resource-destroying map '" << label_ << "' is not idempotent: ||G*G - G||_F = " << idem;
    throw ValidationError(os.str());
  }
  self_adjoint_ = relative_residual(g_.adjoint(), g_) <= kIdempotence;
  cptp_ = cptp_check(g_).passed();
  for (const auto& s : extreme_) {
    if (s.dim() != g_.dim()) throw ValidationError("free extreme point dimension mismatch");
  }
}

ResourceDestroyingMap ResourceDestroyingMap::custom(const SuperOperator& g,
                                                    std::vector<DensityOperator> free_extreme_points,
                                                    std::string label) {
  return ResourceDestroyingMap(g, MapKind::custom, std::move(free_extreme_points), std::move(label));
}

ResourceDestroyingMap make_dephasing(const Matrix& basis) {
  const Index d = basis.rows();
  if (basis.cols() != d || d == 0) throw ValidationError("dephasing: basis must be square");
  const double err = (basis.adjoint() * basis - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > tol::kSpectral) {
    throw ValidationError("dephasing: basis is not orthonormal, residual " + std::to_string(err));
  }
  std::vector<std::pair<Matrix, Matrix>> terms;
  std::vector<DensityOperator> extreme;
  for (Index k = 0; k < d; ++k) {
    const Matrix p = basis.col(k) * basis.col(k).adjoint();
    terms.emplace_back(p, p);
    extreme.push_back(DensityOperator::pure(basis.col(k)));
  }
  return ResourceDestroyingMap(SuperOperator::sandwich(terms), MapKind::dephasing, std::move(extreme),
                               "dephasing");
}

ResourceDestroyingMap make_dephasing(Index dim) { return make_dephasing(Matrix::Identity(dim, dim)); }

ResourceDestroyingMap make_twirl(const std::vector<Matrix>& unitaries) {
  if (unitaries.empty()) throw ValidationError("twirl: empty group");
  const Index d = unitaries.front().rows();
  const auto dd = static_cast<double>(d);
  for (const Matrix& u : unitaries) {
    if (u.rows() != d || u.cols() != d) throw ValidationError("twirl: shape mismatch");
    if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::kSpectral) {
      throw ValidationError("twirl: element is not unitary");
    }
  }
  auto same_up_to_phase = [&](const Matrix& a, const Matrix& b) {
    return std::abs(hs_inner(a, b)) >= dd * (1.0 - tol::kSpectral);
  };
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    for (std::size_t j = i + 1; j < unitaries.size(); ++j) {
      if (same_up_to_phase(unitaries[i], unitaries[j])) throw ValidationError("twirl: duplicate element");
    }
  }
  for (const Matrix& a : unitaries) {
    for (const Matrix& b : unitaries) {
      const Matrix p = a * b;
      const bool found =
          std::any_of(unitaries.begin(), unitaries.end(), [&](const Matrix& u) { return same_up_to_phase(u, p); });
      if (!found) throw ValidationError("twirl: list is not closed under multiplication");
    }
  }
  std::vector<std::pair<Matrix, Matrix>> terms;
  const double w = 1.0 / static_cast<double>(unitaries.size());
  for (const Matrix& u : unitaries) terms.emplace_back(w * u, u.adjoint());
  const SuperOperator g = SuperOperator::sandwich(terms);

  // A generic commutant element separates the minimal projections when the
  // commutant is abelian; then the free states are their convex hull.
  Sampler sampler(0x5eed);
  const Matrix c = hermitian_part(g.apply(sampler.hermitian(d).matrix()));
  const Eigensystem es = eig_hermitian(c);
  std::vector<std::vector<Index>> groups;
  for (Index k = 0; k < d; ++k) {
    if (!groups.empty() && std::abs(es.values(groups.back().front()) - es.values(k)) < 1e-8) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
  }
  std::vector<DensityOperator> extreme;
  if (static_cast<Index>(groups.size()) == superop_rank(g)) {
    for (const auto& grp : groups) {
      Matrix p = Matrix::Zero(d, d);
      for (Index k : grp) p += es.vectors.col(k) * es.vectors.col(k).adjoint();
      extreme.emplace_back(hermitian_part(p / static_cast<double>(grp.size())));
    }
  }
  return ResourceDestroyingMap(g, MapKind::twirl, std::move(extreme), "twirl");
}

ResourceDestroyingMap make_replacement(const DensityOperator& sigma) {
  const Index d = sigma.dim();
  const Matrix l = vec(sigma.matrix()) * vec(Matrix::Identity(d, d)).adjoint();
  return ResourceDestroyingMap(SuperOperator(d, l), MapKind::replacement, {sigma}, "replacement");
}

NormEstimate resource_radius(const ResourceDestroyingMap& g, int restarts, std::uint64_t seed) {
  return induced_one_norm(SuperOperator::identity(g.dim()) - g.superop(), restarts, seed);
}

std::vector<Matrix> hermitian_basis(Index dim) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (Index i = 0; i < dim; ++i) {
    for (Index j = i + 1; j < dim; ++j) {
      Matrix s = Matrix::Zero(dim, dim);
      s(i, j) = r;
      s(j, i) = r;
      out.push_back(s);
      Matrix a = Matrix::Zero(dim, dim);
      a(i, j) = Complex(0.0, r);
      a(j, i) = Complex(0.0, -r);
      out.push_back(a);
    }
  }
  return out;
}

FreeSubspaces subspaces(const ResourceDestroyingMap& g) {
  const Index d = g.dim();
  const std::vector<Matrix> basis = hermitian_basis(d);
  const auto n = static_cast<Index>(basis.size());
  RealMatrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    const Matrix y = hermitian_part(basis[j] - g.apply(basis[j]));
    for (Index i = 0; i < n; ++i) a(i, j) = hs_inner(basis[i], y).real();
  }
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullU);
  const RealVector& sv = svd.singularValues();
  FreeSubspaces out;
  for (Index k = 0; k < n; ++k) {
    Matrix b = Matrix::Zero(d, d);
    for (Index i = 0; i < n; ++i) b += svd.matrixU()(i, k) * basis[i];
    if (sv(k) > 1e-10 * std::max(1.0, sv(0))) {
      out.resourceful.push_back(b);
    } else {
      out.complement.push_back(b);
    }
  }
  return out;
}

double resourceful_component(const FreeSubspaces& s, const Matrix& x) {
  double acc = 0.0;
  for (const Matrix& b : s.resourceful) acc += std::norm(hs_inner(b, x));
  return std::sqrt(acc);
}

double hull_trace_distance(const Matrix& x, const std::vector<DensityOperator>& points) {
  const auto k = static_cast<int>(points.size());
  if (k == 0) throw ValidationError("hull_trace_distance: no points");
  if (k > 16) throw ValidationError("hull_trace_distance: at most 16 points supported");
  const RealVector target = real_coordinates(x);
  std::vector<RealVector> p;
  for (const auto& s : points) p.push_back(real_coordinates(s.matrix()));

  double best_residual = INFINITY;
  std::vector<double> best_w;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int base = idx.front();
    const auto m = static_cast<Index>(idx.size() - 1);
    RealVector w_free = RealVector::Zero(m);
    if (m > 0) {
      RealMatrix a(target.size(), m);
      for (Index j = 0; j < m; ++j) a.col(j) = p[idx[j + 1]] - p[base];
      w_free = a.completeOrthogonalDecomposition().solve(target - p[base]);
    }
    std::vector<double> w(k, 0.0);
    double rest = 1.0;
    for (Index j = 0; j < m; ++j) {
      w[idx[j + 1]] = w_free(j);
      rest -= w_free(j);
    }
    w[base] = rest;
    if (*std::min_element(w.begin(), w.end()) < -1e-14) continue;
    RealVector y = RealVector::Zero(target.size());
    for (int i = 0; i < k; ++i) y += w[i] * p[i];
    const double res = (target - y).norm();
    if (res < best_residual) {
      best_residual = res;
      best_w = w;
    }
  }
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) y += best_w[i] * points[i].matrix();
  return 0.5 * trace_norm(hermitian_part(x - y));
}

RdmReport verify_rdm(const SuperOperator& g, const std::vector<DensityOperator>& free_extreme_points, int samples,
                     std::uint64_t seed) {
  const Index d = g.dim();
  Sampler sampler(seed);
  RdmReport r;
  r.idempotence_residual = relative_residual(g * g, g);

  auto fixed_residual = [&](const Matrix& s) { return (g.apply(s) - s).norm(); };
  for (const auto& s : free_extreme_points) r.fixed_point_residual = std::max(r.fixed_point_residual, fixed_residual(s.matrix()));
  if (!free_extreme_points.empty()) {
    for (int n = 0; n < samples; ++n) {
      Matrix mix = Matrix::Zero(d, d);
      double total = 0.0;
      for (const auto& s : free_extreme_points) {
        const double w = sampler.uniform();
        mix += w * s.matrix();
        total += w;
      }
      r.fixed_point_residual = std::max(r.fixed_point_residual, fixed_residual(mix / total));
    }
  }

  for (int n = 0; n < samples; ++n) {
    const Matrix rho = (n % 2 == 0) ? sampler.mixed_state(d).matrix() : DensityOperator::pure(sampler.pure_state(d)).matrix();
    const Matrix image = g.apply(rho);
    const double res = free_extreme_points.empty() ? (g.apply(image) - image).norm()
                                                   : hull_trace_distance(image, free_extreme_points);
    r.image_residual = std::max(r.image_residual, res);

    const Matrix other = sampler.mixed_state(d).matrix();
    const double a = sampler.uniform();
    const Matrix lhs = g.apply(a * rho + (1.0 - a) * other);
    const Matrix rhs = a * image + (1.0 - a) * g.apply(other);
    r.linearity_residual = std::max(r.linearity_residual, (lhs - rhs).norm());
  }
  r.idempotent = r.idempotence_residual <= kIdempotence;
  r.fixes_free_states = r.fixed_point_residual <= kIdempotence;
  r.image_is_free = r.image_residual <= kImageMembership;
  r.linear = r.linearity_residual <= kIdempotence;
  return r;
}

RdmReport verify_rdm(const ResourceDestroyingMap& g, int samples, std::uint64_t seed) {
  return verify_rdm(g.superop(), g.free_extreme_points(), samples, seed);
}

}  // namespace qres
