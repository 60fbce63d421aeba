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

#include "qres/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qres {

namespace {

void require_dims(const SuperOperator& lambda, Index gdim, const HermitianObservable& m) {
  if (lambda.dim() != gdim || lambda.dim() != m.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: channel " << lambda.dim() << ", map " << gdim << ", observable " << m.dim();
    throw ValidationError(os.str());
  }
}

double yield_gap(const SuperOperator& lambda, const HermitianObservable& m, const Matrix& a, const Matrix& b) {
  return hs_inner(m.matrix(), lambda.apply(a - b)).real();
}

bool is_scalar(const Matrix& m) {
  const Index d = m.rows();
  const Complex alpha = m.trace() / static_cast<double>(d);
  return (m - alpha * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol::kAlgebraic * entry_scale(m);
}

bool unital_adjoint(const SuperOperator& s) {
  const Index d = s.dim();
  const Matrix id = Matrix::Identity(d, d);
  return (s.adjoint_apply(id) - id).cwiseAbs().maxCoeff() <= tol::kAlgebraic;
}

DensityOperator basis_state(Index d, Index k) { return DensityOperator::pure(Vector::Unit(d, k)); }

const double kInf = std::numeric_limits<double>::infinity();

Matrix simplex_point(const std::vector<DensityOperator>& points, const RealVector& w) {
  Matrix s = Matrix::Zero(points.front().dim(), points.front().dim());
  for (std::size_t i = 0; i < points.size(); ++i) s += w(static_cast<Index>(i)) * points[i].matrix();
  return s;
}

// Enumerates compositions of `total` into `parts` non-negative integers.
template <class F>
void for_each_composition(int total, int parts, std::vector<int>& buf, int pos, F&& f) {
  if (pos == parts - 1) {
    buf[pos] = total;
    f(buf);
    return;
  }
  for (int i = 0; i <= total; ++i) {
    buf[pos] = i;
    for_each_composition(total - i, parts, buf, pos + 1, f);
  }
}

RealVector free_to_full(const RealVector& x) {
  RealVector w(x.size() + 1);
  w(0) = 1.0 - x.sum();
  w.tail(x.size()) = x;
  return w;
}

RealVector nelder_mead(const std::function<double(const RealVector&)>& f, const RealVector& x0, double step) {
  const Index n = x0.size();
  if (n == 0) return x0;
  std::vector<RealVector> simplex{x0};
  for (Index i = 0; i < n; ++i) {
    RealVector x = x0;
    x(i) += (x0(i) + step <= 1.0) ? step : -step;
    simplex.push_back(x);
  }
  std::vector<double> fv;
  for (const auto& x : simplex) fv.push_back(f(x));
  for (int iter = 0; iter < 4000; ++iter) {
    std::vector<std::size_t> order(simplex.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<RealVector> s2;
    std::vector<double> f2;
    for (std::size_t i : order) {
      s2.push_back(simplex[i]);
      f2.push_back(fv[i]);
    }
    simplex.swap(s2);
    fv.swap(f2);
    double size = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) size = std::max(size, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    if (size < 1e-13) break;

    RealVector centroid = RealVector::Zero(n);
    for (Index i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(n);
    const RealVector& worst = simplex[n];
    const RealVector xr = centroid + (centroid - worst);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const RealVector xe = centroid + 2.0 * (centroid - worst);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const RealVector xc = centroid + 0.5 * (worst - centroid);
      const double fc = f(xc);
      if (fc < fv[n]) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (Index i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return simplex[best];
}

}  // namespace

double delta_yield(const SuperOperator& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m,
                   const Matrix& rho) {
  require_dims(lambda, g.dim(), m);
  return yield_gap(lambda, m, rho, g.apply(rho));
}

double delta_yield(const SuperOperator& lambda, const StateMap& g, const HermitianObservable& m, const Matrix& rho) {
  require_dims(lambda, lambda.dim(), m);
  return yield_gap(lambda, m, rho, g(rho));
}

Matrix impact_matrix(const SuperOperator& lambda, const ResourceDestroyingMap& g, const Matrix& m) {
  if (lambda.dim() != g.dim() || m.rows() != lambda.dim()) throw ValidationError("impact_matrix: dimension mismatch");
  return g.filter(lambda.adjoint_apply(m));
}

ImpactOperator impact_operator(const QuantumChannel& lambda, const ResourceDestroyingMap& g,
                               const HermitianObservable& m) {
  require_dims(lambda.superop(), g.dim(), m);
  const Matrix b = impact_matrix(lambda.superop(), g, m.matrix());
  return {HermitianObservable(b), lambda.label(), g.label()};
}

ImpactResult capacity_of_impact(const Matrix& b) {
  const Eigensystem es = eig_hermitian(b);
  const Index d = b.rows();
  ImpactResult r;
  r.method = Method::spectral;
  const double hi = es.values(0);
  const double lo = es.values(d - 1);
  r.plus = std::max(hi, 0.0);
  r.minus = std::max(-lo, 0.0);
  r.capacity = std::max(r.plus, r.minus);
  r.degenerate_extremes = std::abs(r.plus - r.minus) <= tol::kAlgebraic;
  const Index k = (r.degenerate_extremes || r.plus >= r.minus) ? 0 : d - 1;
  r.optimizer = DensityOperator::pure(es.vectors.col(k));
  return r;
}

ImpactResult capacity(const SuperOperator& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m) {
  require_dims(lambda, g.dim(), m);
  const Index d = m.dim();
  if (is_scalar(m.matrix()) && unital_adjoint(lambda) && unital_adjoint(g.superop())) {
    ImpactResult r;
    r.optimizer = basis_state(d, 0);
    r.vanishes = true;
    return r;
  }
  const Matrix x = lambda.adjoint_apply(m.matrix());
  const Matrix b = g.filter(x);
  if (max_asymmetry(b) > 1e-11 * entry_scale(b)) {
    throw ValidationError("capacity: impact operator is not Hermitian; use capacity_sampled");
  }
  ImpactResult r = capacity_of_impact(hermitian_part(b));
  r.vanishing_residual = b.norm();
  r.vanishes = r.vanishing_residual < tol::kSpectral;
  return r;
}

ImpactResult capacity(const QuantumChannel& lambda, const ResourceDestroyingMap& g, const HermitianObservable& m) {
  return capacity(lambda.superop(), g, m);
}

ImpactResult capacity_sampled(const SuperOperator& lambda, const StateMap& g, const HermitianObservable& m,
                              int n_samples, Sampler& sampler) {
  require_dims(lambda, lambda.dim(), m);
  const Index d = m.dim();
  ImpactResult r;
  r.method = Method::sampled;
  double best = -1.0;
  Matrix best_rho = Matrix::Identity(d, d) / static_cast<double>(d);
  auto consider = [&](const Matrix& rho) {
    const double dy = yield_gap(lambda, m, rho, g(rho));
    r.plus = std::max(r.plus, dy);
    r.minus = std::max(r.minus, -dy);
    if (std::abs(dy) > best) {
      best = std::abs(dy);
      best_rho = rho;
    }
  };
  for (int i = 0; i < n_samples; ++i) consider(DensityOperator::pure(sampler.pure_state(d)).matrix());
  for (int i = 0; i < n_samples; ++i) consider(sampler.mixed_state(d).matrix());
  r.capacity = std::max(r.plus, r.minus);
  r.optimizer = DensityOperator(best_rho);
  return r;
}

double pi_advantage(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                    const HermitianObservable& m) {
  if (free_extreme_points.empty()) throw ValidationError("pi_advantage: empty extreme-point list");
  require_dims(lambda, free_extreme_points.front().dim(), m);
  const Matrix x = hermitian_part(lambda.adjoint_apply(m.matrix()));
  const Eigensystem es = eig_hermitian(x);
  const double global = std::max(std::abs(es.values(0)), std::abs(es.values(x.rows() - 1)));
  double local = 0.0;
  for (const auto& s : free_extreme_points) local = std::max(local, std::abs(hs_inner(x, s.matrix()).real()));
  return global - local;
}

double divergence(Divergence kind, const Matrix& rho, const Matrix& sigma) {
  if (kind == Divergence::trace_distance) return 0.5 * trace_norm(hermitian_part(rho - sigma));
  const Eigensystem a = eig_hermitian(hermitian_part(rho));
  const Eigensystem b = eig_hermitian(hermitian_part(sigma));
  const Index d = rho.rows();
  const Matrix overlap = (a.vectors.adjoint() * b.vectors).cwiseAbs2();
  double s = 0.0;
  for (Index i = 0; i < d; ++i) {
    const double p = a.values(i);
    if (p <= 1e-15) continue;
    s += p * std::log(p);
    for (Index j = 0; j < d; ++j) {
      const double w = p * overlap(i, j).real();
      if (w <= 1e-15) continue;
      const double q = b.values(j);
      if (q <= 1e-15) return kInf;
      s -= w * std::log(q);
    }
  }
  return s;
}

ClosestFree closest_free_state(const Matrix& rho, const std::vector<DensityOperator>& free_extreme_points,
                               Divergence kind, int grid_resolution) {
  const auto k = static_cast<int>(free_extreme_points.size());
  if (k == 0) throw ValidationError("closest_free_state: empty extreme-point list");
  if (grid_resolution < 1) throw ValidationError("closest_free_state: grid resolution must be positive");
  const auto objective = [&](const RealVector& w) {
    if (w.minCoeff() < -1e-15) return kInf;
    return divergence(kind, rho, simplex_point(free_extreme_points, w.cwiseMax(0.0)));
  };

  double best = kInf;
  RealVector best_w = RealVector::Constant(k, 1.0 / k);
  std::vector<int> buf(k);
  for_each_composition(grid_resolution, k, buf, 0, [&](const std::vector<int>& c) {
    RealVector w(k);
    for (int i = 0; i < k; ++i) w(i) = static_cast<double>(c[i]) / grid_resolution;
    const double v = objective(w);
    if (v < best) {
      best = v;
      best_w = w;
    }
  });

  const auto reduced = [&](const RealVector& x) { return objective(free_to_full(x)); };
  const RealVector refined = free_to_full(nelder_mead(reduced, best_w.tail(k - 1), 1.0 / grid_resolution));
  const double refined_value = objective(refined);
  if (refined_value < best) {
    best = refined_value;
    best_w = refined;
  }

  ClosestFree out;
  out.rho = rho;
  out.weights = best_w;
  out.closest = simplex_point(free_extreme_points, best_w.cwiseMax(0.0));
  out.distance = best;
  return out;
}

namespace {

ClosestFree project_one(const SuperOperator& lambda, const std::vector<DensityOperator>& points, Divergence kind,
                        const HermitianObservable& m, const Matrix& rho, const ProjectedOptions& opts) {
  ClosestFree c = closest_free_state(rho, points, kind, opts.grid_resolution);
  double contribution = std::abs(yield_gap(lambda, m, rho, c.closest));
  const auto k = static_cast<int>(points.size());
  std::vector<int> buf(k);
  for_each_composition(opts.grid_resolution, k, buf, 0, [&](const std::vector<int>& comp) {
    RealVector w(k);
    for (int i = 0; i < k; ++i) w(i) = static_cast<double>(comp[i]) / opts.grid_resolution;
    const Matrix sigma = simplex_point(points, w);
    if (divergence(kind, rho, sigma) <= c.distance + opts.window) {
      contribution = std::max(contribution, std::abs(yield_gap(lambda, m, rho, sigma)));
    }
  });
  c.contribution = contribution;
  return c;
}

}  // namespace

ProjectedResult projected_capacity(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                                   Divergence kind, const HermitianObservable& m, const std::vector<Matrix>& inputs,
                                   const ProjectedOptions& opts) {
  if (free_extreme_points.empty()) throw ValidationError("projected_capacity: empty extreme-point list");
  require_dims(lambda, free_extreme_points.front().dim(), m);
  if (lambda.dim() > 4) throw ValidationError("projected_capacity: dimension above 4 unsupported");
  ProjectedResult r;
  for (const Matrix& rho : inputs) {
    ClosestFree c = project_one(lambda, free_extreme_points, kind, m, rho, opts);
    r.value = std::max(r.value, c.contribution);
    r.samples.push_back(std::move(c));
  }
  return r;
}

ProjectedResult projected_capacity(const SuperOperator& lambda, const std::vector<DensityOperator>& free_extreme_points,
                                   Divergence kind, const HermitianObservable& m, const ProjectedOptions& opts) {
  Sampler sampler(opts.seed);
  const Index d = m.dim();
  std::vector<Matrix> inputs;
  for (int i = 0; i < opts.n_samples; ++i) {
    inputs.push_back(i % 2 == 0 ? DensityOperator::pure(sampler.pure_state(d)).matrix()
                                : sampler.mixed_state(d).matrix());
  }
  return projected_capacity(lambda, free_extreme_points, kind, m, inputs, opts);
}

GeometryReport geometry_checks(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                               const HermitianObservable& m, int n_samples, Sampler& sampler) {
  const ImpactResult c = capacity(lambda, g, m);
  const Index d = m.dim();
  GeometryReport r;
  r.capacity = c.capacity;
  auto consider = [&](const Matrix& rho) {
    const double v = std::abs(yield_gap(lambda, m, rho, g.apply(rho)));
    r.support = std::max(r.support, v);
  };
  consider(c.optimizer.matrix());
  for (int i = 0; i < n_samples; ++i) consider(DensityOperator::pure(sampler.pure_state(d)).matrix());
  for (int i = 0; i < n_samples; ++i) consider(sampler.mixed_state(d).matrix());
  r.max_slab = r.support;
  r.polar_member = r.capacity <= 1.0 + 1e-9;
  r.slab_member = r.max_slab <= 1.0 + 1e-9;
  r.on_boundary = std::abs(r.capacity - 1.0) <= 1e-9;
  r.consistent = r.support <= r.capacity + 1e-12 && std::abs(r.support - r.capacity) <= 1e-10 &&
                 r.polar_member == r.slab_member;
  return r;
}

HypothesisReport hypothesis_test(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                                 const HermitianObservable& m, const DensityOperator& rho, int n, int trials,
                                 Sampler& sampler) {
  if (!m.is_povm_element()) throw ValidationError("hypothesis_test: observable must be a POVM element");
  if (n < 1 || trials < 1) throw ValidationError("hypothesis_test: n and trials must be positive");
  require_dims(lambda, g.dim(), m);
  auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };
  HypothesisReport r;
  r.n = n;
  r.trials = trials;
  r.p0 = clamp01(hs_inner(m.matrix(), lambda.apply(g.apply(rho.matrix()))).real());
  r.p1 = clamp01(hs_inner(m.matrix(), lambda.apply(rho.matrix())).real());
  r.bias = std::abs(r.p1 - r.p0);
  r.p_succ = 0.5 + 0.5 * r.bias;
  r.hoeffding_bound = std::exp(-static_cast<double>(n) * r.bias * r.bias / 2.0);

  const double hi = std::max(r.p0, r.p1);
  const double lo = std::min(r.p0, r.p1);
  const double tau = 0.5 * (r.p0 + r.p1);
  std::binomial_distribution<int> draw_hi(n, hi);
  std::binomial_distribution<int> draw_lo(n, lo);
  long errors_hi = 0;
  long errors_lo = 0;
  for (int i = 0; i < trials; ++i) {
    if (static_cast<double>(draw_hi(sampler.engine())) / n < tau) ++errors_hi;
    if (static_cast<double>(draw_lo(sampler.engine())) / n >= tau) ++errors_lo;
  }
  r.empirical_error = 0.5 * (static_cast<double>(errors_hi) + static_cast<double>(errors_lo)) / trials;
  const double b = std::min(r.hoeffding_bound, 0.5);
  r.statistical_slack = 3.0 * std::sqrt(b * (1.0 - b) / (2.0 * trials));
  return r;
}

}  // namespace qres
