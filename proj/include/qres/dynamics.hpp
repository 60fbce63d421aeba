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
#include <vector>

#include "qres/impact.hpp"

namespace qres {

struct JumpOperator {
  Matrix op;
  double rate = 0.0;
};

class LindbladGenerator {
 public:
  /// Throws ValidationError on a negative rate.
  static LindbladGenerator build_gkls(const HermitianObservable& h, const std::vector<JumpOperator>& jumps);

  Index dim() const { return h_.dim(); }
  const HermitianObservable& hamiltonian() const { return h_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }
  const SuperOperator& liouville() const { return l_; }
  const SuperOperator& adjoint_liouville() const { return ladj_; }

  Matrix apply(const Matrix& rho) const { return l_.apply(rho); }
  Matrix adjoint_apply(const Matrix& m) const { return ladj_.apply(m); }

  /// ||H||_op + sum_k rate_k ||L_k||_op^2.
  double gkls_scale() const;

 private:
  LindbladGenerator(HermitianObservable h, std::vector<JumpOperator> jumps, SuperOperator l, SuperOperator ladj);

  HermitianObservable h_;
  std::vector<JumpOperator> jumps_;
  SuperOperator l_;
  SuperOperator ladj_;
};

/// Piecewise-continuous family t -> L_t.
using GeneratorFamily = std::function<LindbladGenerator(double)>;

QuantumChannel propagate(const LindbladGenerator& gen, double t);
HermitianObservable heisenberg(const LindbladGenerator& gen, const HermitianObservable& m, double t);

struct RkOptions {
  double t0 = 0.0;
  /// Bound on the generator norm used to pick the step; estimated when unset.
  std::optional<double> l_max;
  double tolerance = 1e-9;
  int max_halvings = 8;
};

/// RK4 on the Liouville equation with step h = min(1e-3, 0.01 / L_max),
/// halved until two successive refinements agree.
QuantumChannel propagate(const GeneratorFamily& family, double t, const RkOptions& opts = {});

/// (id - G^dagger)(exp(t L^dagger)(L^dagger(M))).
Matrix rate_operator(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g, const Matrix& m);

double gamma_rate(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g,
                  const HermitianObservable& m);
/// From a propagated channel and the generator at that time.
double gamma_rate(const QuantumChannel& lambda_t, const LindbladGenerator& gen_t, const ResourceDestroyingMap& g,
                  const HermitianObservable& m);
/// Sampled lower estimate for a non-linear G.
double gamma_rate_sampled(const LindbladGenerator& gen, double t, const StateMap& g, const HermitianObservable& m,
                          int n_samples, Sampler& sampler);

struct GammaZero {
  bool zero = false;
  double residual = 0.0;
  double gamma = 0.0;
};

/// Throws NumericalError when the projection test and gamma_rate disagree.
GammaZero gamma_zero_predicate(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g,
                               const HermitianObservable& m);

/// Evaluates C_M(L_t) and Gamma_M(t) for a time-independent generator.
class RateTracker {
 public:
  RateTracker(const LindbladGenerator& gen, const ResourceDestroyingMap& g, const HermitianObservable& m);

  double capacity(double t) const;
  double gamma(double t) const;

 private:
  Matrix filter(const Vector& x) const;

  Matrix g_adj_;
  Matrix ladj_;
  Vector m_;
  Vector lm_;
};

struct QuadratureOptions {
  double tolerance = 1e-9;
  int max_depth = 48;
  /// Initial panels used to locate kinks of |.|.
  int scan_points = 128;
};

/// Adaptive Simpson with splitting at near-zero local minima of f.
double integrate_rate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts = {});

struct VariationResult {
  double lhs = 0.0;
  double integral = 0.0;
  bool holds(double quad_tol) const { return lhs <= integral + quad_tol + 1e-9; }
};

VariationResult variation_bound(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                const HermitianObservable& m, double t1, double t2,
                                const QuadratureOptions& opts = {});

struct DiniRow {
  double h = 0.0;
  double right_quotient = 0.0;
  std::optional<double> left_quotient;
  double gamma = 0.0;
  double slack = 0.0;
  bool ok = false;
};

std::vector<DiniRow> dini_check(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                const HermitianObservable& m, double t, const std::vector<double>& h_list);

struct BoundOptions {
  int grid_points = 200;
  /// Certified upper bound on ||L||_{1->1}; the ascent estimate is used when unset.
  std::optional<double> l_max_certificate;
  int restarts = 32;
  QuadratureOptions quadrature;
};

struct BoundReport {
  std::vector<double> time_grid;
  std::vector<double> capacity_series;
  std::vector<double> gamma_series;
  std::vector<double> variation_integral_series;
  std::vector<double> uniform_bound_series;
  double c_mg = 0.0;
  double r_g = 0.0;
  double l_max = 0.0;
  double l_max_estimate = 0.0;
  bool l_max_certified = false;
  double target = 0.0;
  /// Infinite when the target is unreachable.
  double min_time = 0.0;
  double feasibility_ceiling = 0.0;
  bool feasible = false;
  double gkls_gamma_bound = 0.0;
  /// First grid time at which |C(t) - C(t1)| reaches the target.
  std::optional<double> reached_at;
};

BoundReport time_feasibility(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                             const HermitianObservable& m, double t1, double t2, double target,
                             const BoundOptions& opts = {});

}  // namespace qres
