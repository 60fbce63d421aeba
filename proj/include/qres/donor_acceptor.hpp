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

// Three-level donor-acceptor dimer in the basis {|g>, |D>, |A>}.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qres/dynamics.hpp"

namespace qres::dimer {

inline constexpr Index kG = 0;
inline constexpr Index kD = 1;
inline constexpr Index kA = 2;

struct Params {
  double detuning = 0.0;        // Delta
  double coupling = 0.0;        // J
  double dephasing_rate = 0.0;  // gamma_phi
  double decay_donor = 0.0;     // gamma_D
  double decay_acceptor = 0.0;  // gamma_A
  double theta = 0.0;
  double eta = 1.0;
  double p_donor = 0.0;
  double p_acceptor = 0.0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
  /// Copy with eta and p_j set from the rates over a step dt.
  Params with_step(double dt) const;
  bool consistent_with_step(double dt, double tolerance = 1e-12) const;
};

struct ObservableCoeffs {
  double mu_g = 0.0;
  double mu_d = 0.0;
  double mu_a = 0.0;
  Complex nu = 0.0;

  HermitianObservable matrix(bool povm_element = false) const;
  static ObservableCoeffs acceptor() { return {0.0, 0.0, 1.0, 0.0}; }
};

enum class Regime { underdamped, critical, overdamped };

std::string to_string(Regime r);

/// Tag from the sign of gamma_phi^2 - 16 J^2, with a critical band
/// |gamma_phi - 4|J|| < 1e-6 |J|.
Regime regime_of(const Params& p);

double mixing_angle(double detuning, double coupling);

Matrix hamiltonian(const Params& p);
Matrix unitary_theta(double theta);
/// Phase and amplitude damping Kraus operators, without the unitary.
std::vector<Matrix> damping_kraus(const Params& p);

struct Model {
  HermitianObservable hamiltonian;
  QuantumChannel unitary;
  QuantumChannel chain;
  LindbladGenerator generator;
};

Model build_model(const Params& p);
QuantumChannel kraus_chain(const Params& p);
LindbladGenerator generator(const Params& p);
ResourceDestroyingMap site_dephasing();

/// Capacity of the damped chain under site dephasing, with nu complex.
double capacity_closed_form(const Params& p, const ObservableCoeffs& m);

struct TrajectoryPoint {
  double t = 0.0;
  double u = 0.0;
  double v = 0.0;
  double x_d = 0.0;
  double x_a = 0.0;
  double s = 0.0;  // x_A - x_D
  double n = 0.0;  // x_A + x_D
  Regime regime = Regime::underdamped;
  double capacity = 0.0;  // |y|
  double rate = 0.0;      // |dy/dt|
};

/// Requires gamma_phi = 0 and gamma_D = gamma_A.
TrajectoryPoint analytic_zero_dephasing(const Params& p, const ObservableCoeffs& m, double t);
/// Requires Delta = 0 and gamma_D = gamma_A.
TrajectoryPoint analytic_zero_detuning(const Params& p, const ObservableCoeffs& m, double t);
/// Dispatches to whichever closed form applies.
std::vector<TrajectoryPoint> trajectory(const Params& p, const ObservableCoeffs& m, const std::vector<double>& times);

/// Eigenvalues of the 4x4 population-coherence system with gamma_phi = 0.
std::vector<Complex> zero_dephasing_eigenvalues(const Params& p);
/// The 4x4 drift matrix acting on (u, v, x_D - mu_g, x_A - mu_g).
RealMatrix ode_matrix(const Params& p);

/// Rate for M = |A><A| with gamma_phi = 0 and gamma_D = gamma_A.
double rate_closed_form(const Params& p, double t);
/// Resonant forms for M = |A><A|; require Delta = 0, gamma_phi = 0, gamma_D = gamma_A.
double resonance_capacity(const Params& p, double t);
double resonance_rate(const Params& p, double t);

/// 2 ||H||_op + 2 sum_k ||L_k||_op^2.
double generator_norm_bound(const Params& p);

struct ClosedFormBounds {
  Regime regime = Regime::underdamped;
  double t1 = 0.0;
  double t2 = 0.0;
  double variation_bound = 0.0;
  /// R_u or R_o.
  double envelope = 0.0;
  /// zeta or zeta - kappa.
  double decay = 0.0;
  double a_u = 0.0;
  double b = 0.0;
  double target = 0.0;
  double feasibility_ceiling = 0.0;
  /// Only when Re(nu) = 0; infinite when the target is unreachable.
  std::optional<double> min_time;
  bool feasible = false;
};

/// Zero-detuning envelopes. Requires Delta = 0, gamma_D = gamma_A, and
/// gamma_phi outside the critical band.
ClosedFormBounds bounds_closed_form(const Params& p, const ObservableCoeffs& m, double t1, double t2, double target);

struct ResonanceBounds {
  double variation_bound = 0.0;
  double feasibility_ceiling = 0.0;
  double min_time = 0.0;
  bool feasible = false;
};

/// M = |A><A| on resonance without dephasing.
ResonanceBounds resonance_bounds(const Params& p, double t1, double t2, double target);

}  // namespace qres::dimer
