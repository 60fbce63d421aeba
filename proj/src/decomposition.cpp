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

#include "qres/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace qres {

namespace {

constexpr double kBlock = 1e-10;
constexpr double kCompatible = 1e-9;

bool trace_annihilating(const SuperOperator& s) {
  const Index d = s.dim();
  return s.adjoint_apply(Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-11 * std::max(1.0, s.frobenius_norm());
}

}  // namespace

SplitChannel split(const SuperOperator& t, const ResourceDestroyingMap& g) {
  if (t.dim() != g.dim()) throw ValidationError("split: dimension mismatch");
  const SuperOperator& gs = g.superop();
  const SuperOperator perp = SuperOperator::identity(t.dim()) - gs;
  const SuperOperator free = gs * t * gs;
  SplitChannel s{free,          t - free,         free, perp * t * perp, perp * t * gs,
                 gs * t * perp, false,            false};
  if (g.cptp()) s.free_is_cptp = cptp_check(free).passed();
  s.res_trace_annihilating = trace_annihilating(s.res);
  return s;
}

SplitChannel split_channel(const QuantumChannel& lambda, const ResourceDestroyingMap& g) {
  return split(lambda.superop(), g);
}

SplitChannel split_generator(const LindbladGenerator& gen, const ResourceDestroyingMap& g) {
  return split(gen.liouville(), g);
}

CapacityEquality capacity_equality_check(const SuperOperator& lambda, const ResourceDestroyingMap& g,
                                         const HermitianObservable& m) {
  const SplitChannel s = split(lambda, g);
  const SuperOperator tilde = lambda - lambda * g.superop();
  CapacityEquality r;
  r.full = capacity(lambda, g, m).capacity;
  r.res = capacity(s.res, g, m).capacity;
  r.res_tilde = capacity(tilde, g, m).capacity;
  r.map_difference = (tilde - s.res).frobenius_norm();
  r.maps_equal = r.map_difference < 1e-11 * std::max(1.0, lambda.frobenius_norm());
  const double spread = std::max({r.full, r.res, r.res_tilde}) - std::min({r.full, r.res, r.res_tilde});
  r.agree = spread <= 1e-10;
  return r;
}

CrossBlocks cross_block_flags(const SuperOperator& lambda, const ResourceDestroyingMap& g) {
  const SplitChannel s = split(lambda, g);
  CrossBlocks r;
  r.generating_norm = s.perp_g.frobenius_norm();
  r.activating_norm = s.g_perp.frobenius_norm();
  r.commutator_norm = (lambda * g.superop() - g.superop() * lambda).frobenius_norm();
  r.non_generating = r.generating_norm < kBlock;
  r.non_activating = r.activating_norm < kBlock;
  r.covariant = r.non_generating && r.non_activating;
  return r;
}

std::vector<double> compatibility_grid(double t_start, double t_end) {
  std::vector<double> times{t_start};
  constexpr int n = 128;
  for (int k = 0; k < n; ++k) times.push_back(t_start + (t_end - t_start) * (k + 0.5) / n);
  times.push_back(t_end);
  return times;
}

CompatibilityReport compatibility_check(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                        const std::vector<double>& times) {
  const Index d = gen.dim();
  const Matrix& l = gen.liouville().liouville();
  const Matrix& gm = g.superop().liouville();
  const Matrix perp = Matrix::Identity(d * d, d * d) - gm;
  const Matrix l_free = gm * l * gm;
  const double h = 1e-4 / std::max(1.0, l.norm());
  CompatibilityReport r;
  for (double t : times) {
    const Matrix lt = matrix_exp(l, t);
    const double res = (gm * l * perp * lt * gm).norm();
    const Matrix deriv = (gm * (matrix_exp(l, t + h) - matrix_exp(l, t - h)) * gm) / (2.0 * h);
    const double ode = (deriv - l_free * (gm * lt * gm)).norm();
    r.times.push_back(t);
    r.residuals.push_back(res);
    r.ode_residuals.push_back(ode);
    r.max_residual = std::max(r.max_residual, res);
  }
  r.compatible = r.max_residual < kCompatible;
  return r;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix sigma_plus() { return sigma_minus().adjoint(); }

LindbladGenerator qubit_pauli_decay(double gamma_x, double gamma_y, double gamma_z) {
  return LindbladGenerator::build_gkls(HermitianObservable(Matrix::Zero(2, 2)),
                                       {{pauli_x(), gamma_x}, {pauli_y(), gamma_y}, {pauli_z(), gamma_z}});
}

LindbladGenerator qubit_rabi(double omega) {
  return LindbladGenerator::build_gkls(HermitianObservable(0.5 * omega * pauli_x()), {});
}

}  // namespace qres
