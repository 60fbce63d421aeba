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

#include "qres/donor_acceptor.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qres::dimer {

namespace {

constexpr double kCriticalBand = 1e-6;
constexpr double kExactZero = 1e-12;

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw ValidationError(std::string("dimer: ") + name + " is not finite");
}

void require_nonnegative(double x, const char* name) {
  require_finite(x, name);
  if (x < 0.0) throw ValidationError(std::string("dimer: ") + name + " must be non-negative");
}

void require_unit(double x, const char* name) {
  require_finite(x, name);
  if (x < 0.0 || x > 1.0) throw ValidationError(std::string("dimer: ") + name + " must lie in [0, 1]");
}

bool is_zero(double x, double scale) { return std::abs(x) <= kExactZero * std::max(1.0, std::abs(scale)); }

void require_symmetric_decay(const Params& p) {
  if (!is_zero(p.decay_donor - p.decay_acceptor, p.decay_donor))
    throw PreconditionError("dimer: closed form requires gamma_D = gamma_A");
}

Matrix projector(Index k) {
  Matrix m = Matrix::Zero(3, 3);
  m(k, k) = 1.0;
  return m;
}

Matrix transition(Index to, Index from) {
  Matrix m = Matrix::Zero(3, 3);
  m(to, from) = 1.0;
  return m;
}

// sin(w t) / w, continuous at w = 0.
double sin_over(double w, double t) {
  if (std::abs(w * t) < 1e-8) return t;
  return std::sin(w * t) / w;
}

// (cos(w t) - 1) / w^2, continuous at w = 0.
double cos_minus_one_over(double w, double t) {
  if (std::abs(w * t) < 1e-8) return -0.5 * t * t;
  const double h = std::sin(0.5 * w * t) / w;
  return -2.0 * h * h;
}

// Pair (c, s) with c'' = -w2 c, c(0) = 1, s = c-integral, for signed w2.
// Gives (cos wt, sin wt / w) for w2 = w^2 > 0 and (cosh kt, sinh kt / k) for w2 = -k^2.
struct Oscillator {
  double c;
  double s;
};

Oscillator oscillator(double w2, double t) {
  if (std::abs(w2) * t * t < 1.0) {
    double c = 0.0, s = 0.0;
    double term_c = 1.0, term_s = t;
    for (int k = 0; k < 40; ++k) {
      c += term_c;
      s += term_s;
      term_c *= -w2 * t * t / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      term_s *= -w2 * t * t / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      if (std::abs(term_c) < 1e-18 * std::abs(c) && std::abs(term_s) < 1e-18 * std::abs(s)) break;
    }
    return {c, s};
  }
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    return {std::cos(w * t), std::sin(w * t) / w};
  }
  const double k = std::sqrt(-w2);
  return {std::cosh(k * t), std::sinh(k * t) / k};
}

}  // namespace

void Params::validate() const {
  require_finite(detuning, "detuning");
  require_finite(coupling, "coupling");
  require_nonnegative(dephasing_rate, "dephasing_rate");
  require_nonnegative(decay_donor, "decay_donor");
  require_nonnegative(decay_acceptor, "decay_acceptor");
  require_finite(theta, "theta");
  require_unit(eta, "eta");
  require_unit(p_donor, "p_donor");
  require_unit(p_acceptor, "p_acceptor");
}

Params Params::with_step(double dt) const {
  require_nonnegative(dt, "dt");
  Params q = *this;
  q.eta = std::exp(-dephasing_rate * dt);
  q.p_donor = -std::expm1(-decay_donor * dt);
  q.p_acceptor = -std::expm1(-decay_acceptor * dt);
  return q;
}

bool Params::consistent_with_step(double dt, double tolerance) const {
  const Params q = with_step(dt);
  return std::abs(q.eta - eta) <= tolerance && std::abs(q.p_donor - p_donor) <= tolerance &&
         std::abs(q.p_acceptor - p_acceptor) <= tolerance;
}

HermitianObservable ObservableCoeffs::matrix(bool povm_element) const {
  Matrix m = Matrix::Zero(3, 3);
  m(kG, kG) = mu_g;
  m(kD, kD) = mu_d;
  m(kA, kA) = mu_a;
  m(kD, kA) = nu;
  m(kA, kD) = std::conj(nu);
  return HermitianObservable(m, povm_element);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::underdamped:
      return "underdamped";
    case Regime::critical:
      return "critical";
    case Regime::overdamped:
      return "overdamped";
  }
  return "unknown";
}

Regime regime_of(const Params& p) {
  const double four_j = 4.0 * std::abs(p.coupling);
  const double gap = p.dephasing_rate - four_j;
  if (p.coupling == 0.0) return p.dephasing_rate > 0.0 ? Regime::overdamped : Regime::critical;
  if (std::abs(gap) < kCriticalBand * std::abs(p.coupling)) return Regime::critical;
  return gap < 0.0 ? Regime::underdamped : Regime::overdamped;
}

double mixing_angle(double detuning, double coupling) {
  if (detuning == 0.0) return coupling == 0.0 ? 0.0 : std::copysign(0.25 * std::numbers::pi, coupling);
  return 0.5 * std::atan(2.0 * coupling / detuning);
}

Matrix hamiltonian(const Params& p) {
  Matrix h = Matrix::Zero(3, 3);
  h(kD, kD) = 0.5 * p.detuning;
  h(kA, kA) = -0.5 * p.detuning;
  h(kD, kA) = p.coupling;
  h(kA, kD) = p.coupling;
  return h;
}

Matrix unitary_theta(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix u = Matrix::Zero(3, 3);
  u(kG, kG) = 1.0;
  u(kD, kD) = c;
  u(kA, kA) = c;
  u(kA, kD) = s;
  u(kD, kA) = -s;
  return u;
}

std::vector<Matrix> damping_kraus(const Params& p) {
  p.validate();
  const double e = p.eta;
  const double pd = p.p_donor;
  const double pa = p.p_acceptor;
  const Matrix pg = projector(kG);
  const Matrix pdd = projector(kD);
  const Matrix paa = projector(kA);
  std::vector<Matrix> ks;
  ks.push_back(pg + std::sqrt((1 + e) * (1 - pd) / 2) * pdd + std::sqrt((1 + e) * (1 - pa) / 2) * paa);
  ks.push_back(std::sqrt((1 - e) * (1 - pd) / 2) * pdd - std::sqrt((1 - e) * (1 - pa) / 2) * paa);
  ks.push_back(std::sqrt(pd * (1 + e) / 2) * transition(kG, kD));
  ks.push_back(std::sqrt(pa * (1 + e) / 2) * transition(kG, kA));
  ks.push_back(std::sqrt(pd * (1 - e) / 2) * transition(kG, kD));
  ks.push_back(-std::sqrt(pa * (1 - e) / 2) * transition(kG, kA));
  return ks;
}

QuantumChannel kraus_chain(const Params& p) {
  const Matrix u = unitary_theta(p.theta);
  std::vector<Matrix> ks;
  for (const Matrix& k : damping_kraus(p)) {
    if (k.cwiseAbs().maxCoeff() == 0.0) continue;
    ks.push_back(k * u);
  }
  return QuantumChannel::from_kraus(ks);
}

LindbladGenerator generator(const Params& p) {
  p.validate();
  return LindbladGenerator::build_gkls(HermitianObservable(hamiltonian(p)),
                                       {{projector(kD), p.dephasing_rate},
                                        {projector(kA), p.dephasing_rate},
                                        {transition(kG, kD), p.decay_donor},
                                        {transition(kG, kA), p.decay_acceptor}});
}

Model build_model(const Params& p) {
  p.validate();
  return Model{HermitianObservable(hamiltonian(p)), QuantumChannel::unitary(unitary_theta(p.theta)), kraus_chain(p),
               generator(p)};
}

ResourceDestroyingMap site_dephasing() { return make_dephasing(3); }

double capacity_closed_form(const Params& p, const ObservableCoeffs& m) {
  p.validate();
  const double x_dd = m.mu_d * (1 - p.p_donor) + p.p_donor * m.mu_g;
  const double x_aa = m.mu_a * (1 - p.p_acceptor) + p.p_acceptor * m.mu_g;
  const Complex w = p.eta * std::sqrt((1 - p.p_donor) * (1 - p.p_acceptor)) * m.nu;
  const double c2 = std::cos(2 * p.theta);
  const double s2 = std::sin(2 * p.theta);
  return std::abs(Complex(0.5 * s2 * (x_aa - x_dd) + c2 * w.real(), w.imag()));
}

TrajectoryPoint analytic_zero_dephasing(const Params& p, const ObservableCoeffs& m, double t) {
  p.validate();
  if (!is_zero(p.dephasing_rate, p.coupling)) throw PreconditionError("dimer: zero-dephasing form requires gamma_phi = 0");
  require_symmetric_decay(p);
  const double g = p.decay_donor;
  const double delta = p.detuning;
  const double j = p.coupling;
  const double omega = std::sqrt(4 * j * j + delta * delta);
  const double re = m.nu.real();
  const double im = m.nu.imag();
  const double s0 = m.mu_a - m.mu_d;
  const double drive = delta * re + j * s0;
  const double sn = sin_over(omega, t);
  const double cm = cos_minus_one_over(omega, t);
  const double env = std::exp(-g * t);

  TrajectoryPoint pt;
  pt.t = t;
  pt.regime = regime_of(p);
  pt.u = env * (re - delta * im * sn + delta * drive * cm);
  pt.v = env * (im * std::cos(omega * t) + drive * sn);
  pt.s = env * (s0 - 4 * j * im * sn + 4 * j * drive * cm);
  pt.n = 2 * m.mu_g + (m.mu_a + m.mu_d - 2 * m.mu_g) * env;
  pt.x_a = 0.5 * (pt.n + pt.s);
  pt.x_d = 0.5 * (pt.n - pt.s);
  const Complex y(pt.u, pt.v);
  const Complex dy = Complex(0.0, 1.0) * (delta * y + j * pt.s) - g * y;
  pt.capacity = std::abs(y);
  pt.rate = std::abs(dy);
  return pt;
}

TrajectoryPoint analytic_zero_detuning(const Params& p, const ObservableCoeffs& m, double t) {
  p.validate();
  if (!is_zero(p.detuning, p.coupling)) throw PreconditionError("dimer: zero-detuning form requires Delta = 0");
  require_symmetric_decay(p);
  const double g = p.decay_donor;
  const double gp = p.dephasing_rate;
  const double j = p.coupling;
  const double xi = gp + g;
  const double zeta = 0.5 * (g + xi);
  const double w2 = 0.25 * (16 * j * j - gp * gp);
  const double re = m.nu.real();
  const double im = m.nu.imag();
  const double s0 = m.mu_a - m.mu_d;
  const Oscillator osc = oscillator(w2, t);
  const double env = std::exp(-zeta * t);

  TrajectoryPoint pt;
  pt.t = t;
  pt.regime = regime_of(p);
  pt.u = re * std::exp(-xi * t);
  pt.v = env * (im * osc.c + 0.5 * (2 * j * s0 - gp * im) * osc.s);
  pt.s = env * (s0 * osc.c + 0.5 * (gp * s0 - 8 * j * im) * osc.s);
  pt.n = (m.mu_a + m.mu_d - 2 * m.mu_g) * std::exp(-g * t) + 2 * m.mu_g;
  pt.x_a = 0.5 * (pt.n + pt.s);
  pt.x_d = 0.5 * (pt.n - pt.s);
  pt.capacity = std::hypot(pt.u, pt.v);
  pt.rate = std::hypot(xi * pt.u, j * pt.s - xi * pt.v);
  return pt;
}

std::vector<TrajectoryPoint> trajectory(const Params& p, const ObservableCoeffs& m, const std::vector<double>& times) {
  p.validate();
  require_symmetric_decay(p);
  const bool no_dephasing = is_zero(p.dephasing_rate, p.coupling);
  const bool no_detuning = is_zero(p.detuning, p.coupling);
  if (!no_dephasing && !no_detuning)
    throw PreconditionError("dimer: closed-form trajectory requires gamma_phi = 0 or Delta = 0");
  std::vector<TrajectoryPoint> out;
  out.reserve(times.size());
  for (double t : times)
    out.push_back(no_dephasing ? analytic_zero_dephasing(p, m, t) : analytic_zero_detuning(p, m, t));
  return out;
}

std::vector<Complex> zero_dephasing_eigenvalues(const Params& p) {
  const double g = p.decay_donor;
  const double omega = std::sqrt(4 * p.coupling * p.coupling + p.detuning * p.detuning);
  return {Complex(-g, 0.0), Complex(-g, 0.0), Complex(-g, omega), Complex(-g, -omega)};
}

RealMatrix ode_matrix(const Params& p) {
  const double xi = p.dephasing_rate + 0.5 * (p.decay_donor + p.decay_acceptor);
  const double d = p.detuning;
  const double j = p.coupling;
  RealMatrix a(4, 4);
  a << -xi, -d, 0, 0,
       d, -xi, -j, j,
       0, 2 * j, -p.decay_donor, 0,
       0, -2 * j, 0, -p.decay_acceptor;
  return a;
}

double rate_closed_form(const Params& p, double t) {
  p.validate();
  if (!is_zero(p.dephasing_rate, p.coupling)) throw PreconditionError("dimer: rate form requires gamma_phi = 0");
  require_symmetric_decay(p);
  const double g = p.decay_donor;
  const double d = p.detuning;
  const double omega = std::sqrt(4 * p.coupling * p.coupling + d * d);
  const double sn = sin_over(omega, t);
  const double first = g * cos_minus_one_over(omega, t) + sn;
  const double second = std::cos(omega * t) - g * sn;
  return std::exp(-g * t) * std::abs(p.coupling) * std::sqrt(d * d * first * first + second * second);
}

namespace {

void require_resonance(const Params& p) {
  p.validate();
  if (!is_zero(p.detuning, p.coupling)) throw PreconditionError("dimer: resonance requires Delta = 0");
  if (!is_zero(p.dephasing_rate, p.coupling)) throw PreconditionError("dimer: resonance form requires gamma_phi = 0");
  require_symmetric_decay(p);
  if (p.coupling == 0.0) throw PreconditionError("dimer: resonance form requires J != 0");
}

}  // namespace

double resonance_capacity(const Params& p, double t) {
  require_resonance(p);
  return 0.5 * std::exp(-p.decay_donor * t) * std::abs(std::sin(2 * p.coupling * t));
}

double resonance_rate(const Params& p, double t) {
  require_resonance(p);
  const double g = p.decay_donor;
  const double j = p.coupling;
  return std::exp(-g * t) * std::abs(j) * std::abs(std::cos(2 * j * t) - g / (2 * j) * std::sin(2 * j * t));
}

double generator_norm_bound(const Params& p) {
  p.validate();
  const double h_norm = 0.5 * std::sqrt(4 * p.coupling * p.coupling + p.detuning * p.detuning);
  return 2 * h_norm + 2 * (2 * p.dephasing_rate + p.decay_donor + p.decay_acceptor);
}

ClosedFormBounds bounds_closed_form(const Params& p, const ObservableCoeffs& m, double t1, double t2, double target) {
  p.validate();
  if (!is_zero(p.detuning, p.coupling)) throw PreconditionError("dimer: envelope bounds require Delta = 0");
  require_symmetric_decay(p);
  if (!(t1 >= 0.0 && t2 >= t1)) throw ValidationError("dimer: bounds need 0 <= t1 <= t2");
  if (!(target >= 0.0)) throw ValidationError("dimer: target must be non-negative");
  const Regime regime = regime_of(p);
  if (regime == Regime::critical)
    throw PreconditionError("dimer: envelope bounds are singular in the critical band |gamma_phi - 4|J|| < 1e-6 |J|");

  const double g = p.decay_donor;
  const double gp = p.dephasing_rate;
  const double j = p.coupling;
  const double xi = gp + g;
  const double zeta = 0.5 * (g + xi);
  const double re = m.nu.real();
  const double im = m.nu.imag();
  const double s0 = m.mu_a - m.mu_d;

  ClosedFormBounds b;
  b.regime = regime;
  b.t1 = t1;
  b.t2 = t2;
  b.target = target;
  b.a_u = j * s0 - xi * im;
  const double numer = im * (xi * gp - 8 * j * j);
  if (regime == Regime::underdamped) {
    const double omega = 0.5 * std::sqrt(16 * j * j - gp * gp);
    b.b = (numer - j * s0 * (g + xi)) / (2 * omega);
    b.decay = zeta;
  } else {
    const double kappa = 0.5 * std::sqrt(gp * gp - 16 * j * j);
    b.b = (numer - j * s0 * (2 * g + gp)) / (2 * kappa);
    b.decay = zeta - kappa;
  }
  if (!(b.decay > 0.0)) throw PreconditionError("dimer: envelope bounds need a positive decay rate");
  b.envelope = std::hypot(b.a_u, b.b);

  const double real_part =
      xi > 0.0 ? std::abs(re) * (std::exp(-xi * t1) - std::exp(-xi * t2)) : 0.0;
  b.variation_bound = real_part + b.envelope / b.decay * (std::exp(-b.decay * t1) - std::exp(-b.decay * t2));
  b.feasibility_ceiling = b.envelope / b.decay * std::exp(-b.decay * t1);
  b.feasible = target < b.feasibility_ceiling;
  if (re == 0.0) {
    if (target == 0.0) {
      b.min_time = 0.0;
    } else if (!b.feasible) {
      b.min_time = std::numeric_limits<double>::infinity();
    } else {
      const double x = b.decay * target * std::exp(b.decay * t1) / b.envelope;
      b.min_time = -std::log1p(-x) / b.decay;
    }
  }
  return b;
}

ResonanceBounds resonance_bounds(const Params& p, double t1, double t2, double target) {
  require_resonance(p);
  const double g = p.decay_donor;
  if (!(g > 0.0)) throw PreconditionError("dimer: resonance bounds require gamma > 0");
  if (!(t1 >= 0.0 && t2 >= t1)) throw ValidationError("dimer: bounds need 0 <= t1 <= t2");
  const double j = std::abs(p.coupling);
  const double r = std::sqrt(1 + g * g / (4 * j * j));
  ResonanceBounds b;
  b.variation_bound = j * r / g * (std::exp(-g * t1) - std::exp(-g * t2));
  b.feasibility_ceiling = j / g * std::exp(-g * t1) * r;
  b.feasible = target < b.feasibility_ceiling;
  const double x = g * std::exp(g * t1) * target / (j * r);
  b.min_time = x < 1.0 ? std::log(1.0 / (1.0 - x)) / g : std::numeric_limits<double>::infinity();
  return b;
}

}  // namespace qres::dimer
