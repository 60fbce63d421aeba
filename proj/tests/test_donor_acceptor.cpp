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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qres/donor_acceptor.hpp"

namespace qres::dimer {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix unit(Index i, Index j) {
  Matrix m = Matrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

// Adjoint master equation written out by hand for the dimer.
Matrix adjoint_rhs(const Params& p, const Matrix& x) {
  const Complex i(0.0, 1.0);
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 0.5 * p.detuning;
  h(2, 2) = -0.5 * p.detuning;
  h(1, 2) = h(2, 1) = p.coupling;
  Matrix out = i * (h * x - x * h);
  const auto add = [&](const Matrix& l, double rate) {
    const Matrix ll = l.adjoint() * l;
    out += rate * (l.adjoint() * x * l - 0.5 * (ll * x + x * ll));
  };
  add(unit(1, 1), p.dephasing_rate);
  add(unit(2, 2), p.dephasing_rate);
  add(unit(0, 1), p.decay_donor);
  add(unit(0, 2), p.decay_acceptor);
  return out;
}

// Classical RK4 on the adjoint equation, recording M(t) at each requested time.
std::vector<Matrix> rk4_heisenberg(const Params& p, const Matrix& m, const std::vector<double>& times, double h) {
  std::vector<Matrix> out;
  Matrix x = m;
  double t = 0.0;
  for (double target : times) {
    while (t < target) {
      const double step = std::min(h, target - t);
      const Matrix k1 = adjoint_rhs(p, x);
      const Matrix k2 = adjoint_rhs(p, x + 0.5 * step * k1);
      const Matrix k3 = adjoint_rhs(p, x + 0.5 * step * k2);
      const Matrix k4 = adjoint_rhs(p, x + step * k3);
      x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += step;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<double> grid(double t_end, int n) {
  std::vector<double> ts;
  for (int k = 0; k < n; ++k) ts.push_back(t_end * k / (n - 1));
  return ts;
}

ObservableCoeffs random_coeffs(Sampler& s) {
  return {s.uniform(), s.uniform(), s.uniform(), Complex(s.uniform() - 0.5, s.uniform() - 0.5)};
}

Params fig2() {
  Params p;
  p.detuning = 130.0;
  p.coupling = 100.0;
  p.decay_donor = p.decay_acceptor = 5.0;
  return p;
}

Params fig4(double dephasing) {
  Params p;
  p.coupling = 100.0;
  p.decay_donor = p.decay_acceptor = 5.0;
  p.dephasing_rate = dephasing;
  return p;
}

void expect_matches_oracle(const Params& p, const ObservableCoeffs& c, double t_end, double tol) {
  const std::vector<double> ts = grid(t_end, 200);
  const auto traj = trajectory(p, c, ts);
  const auto oracle = rk4_heisenberg(p, c.matrix().matrix(), ts, 1e-5);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Matrix& x = oracle[k];
    EXPECT_NEAR(traj[k].u, x(1, 2).real(), tol) << "t=" << ts[k];
    EXPECT_NEAR(traj[k].v, x(1, 2).imag(), tol) << "t=" << ts[k];
    EXPECT_NEAR(traj[k].x_d, x(1, 1).real(), tol);
    EXPECT_NEAR(traj[k].x_a, x(2, 2).real(), tol);
    EXPECT_NEAR(traj[k].capacity, std::abs(x(1, 2)), tol);
    EXPECT_NEAR(traj[k].rate, std::abs(adjoint_rhs(p, x)(1, 2)), tol * 100.0 * (1.0 + std::abs(p.coupling)));
  }
}

TEST(Params, ValidationAndStepConsistency) {
  Params p = fig4(50.0);
  p.eta = 1.5;
  EXPECT_THROW(p.validate(), ValidationError);
  p.eta = 1.0;
  p.decay_donor = -1.0;
  EXPECT_THROW(p.validate(), ValidationError);
  const Params q = fig4(50.0).with_step(1e-3);
  EXPECT_NEAR(q.eta, std::exp(-0.05), 1e-15);
  EXPECT_NEAR(q.p_donor, 1.0 - std::exp(-0.005), 1e-15);
  EXPECT_TRUE(q.consistent_with_step(1e-3));
  EXPECT_FALSE(q.consistent_with_step(2e-3));
}

TEST(MixingAngle, Values) {
  EXPECT_NEAR(mixing_angle(0.0, 1.0), kPi / 4, 1e-15);
  EXPECT_NEAR(mixing_angle(0.0, -1.0), -kPi / 4, 1e-15);
  EXPECT_NEAR(mixing_angle(130.0, 100.0), 0.5 * std::atan(200.0 / 130.0), 1e-15);
}

TEST(Chain, KrausCompletenessAndStructure) {
  Sampler s(1);
  for (int i = 0; i < 50; ++i) {
    Params p;
    p.theta = 2 * kPi * s.uniform();
    p.eta = s.uniform();
    p.p_donor = s.uniform();
    p.p_acceptor = s.uniform();
    const auto ks = damping_kraus(p);
    EXPECT_EQ(ks.size(), 6u);
    Matrix sum = Matrix::Zero(3, 3);
    for (const Matrix& k : ks) sum += k.adjoint() * k;
    EXPECT_LT((sum - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_TRUE(cptp_check(kraus_chain(p).superop()).passed());
  }
}

TEST(Chain, ThetaSweepClosedForm) {
  const ResourceDestroyingMap g = site_dephasing();
  const HermitianObservable m = ObservableCoeffs::acceptor().matrix(true);
  for (int k = 0; k <= 180; ++k) {
    const double theta = kPi * k / 180;
    const double spectral = capacity(QuantumChannel::unitary(unitary_theta(theta)), g, m).capacity;
    EXPECT_NEAR(spectral, 0.5 * std::abs(std::sin(2 * theta)), 1e-10);
  }
}

TEST(Chain, PaperValues) {
  Params p;
  p.theta = kPi / 8;
  EXPECT_NEAR(capacity_closed_form(p, ObservableCoeffs::acceptor()), 0.35355339059327373, 1e-15);
  p.theta = kPi / 4;
  EXPECT_NEAR(capacity_closed_form(p, ObservableCoeffs::acceptor()), 0.5, 1e-15);
  p.p_acceptor = 0.2;
  EXPECT_NEAR(capacity_closed_form(p, ObservableCoeffs::acceptor()), 0.4, 1e-15);
  EXPECT_NEAR(capacity(kraus_chain(p), site_dephasing(), ObservableCoeffs::acceptor().matrix()).capacity, 0.4, 1e-12);
}

TEST(Chain, GeneralObservableClosedForm) {
  Sampler s(2);
  for (int i = 0; i < 500; ++i) {
    Params p;
    p.theta = 2 * kPi * s.uniform();
    p.eta = s.uniform();
    p.p_donor = s.uniform();
    p.p_acceptor = s.uniform();
    const ObservableCoeffs c = random_coeffs(s);
    const double spectral = capacity(kraus_chain(p), site_dephasing(), c.matrix()).capacity;
    EXPECT_NEAR(capacity_closed_form(p, c), spectral, 1e-10);
  }
}

TEST(Regime, Tags) {
  EXPECT_EQ(regime_of(fig4(50.0)), Regime::underdamped);
  EXPECT_EQ(regime_of(fig4(500.0)), Regime::overdamped);
  EXPECT_EQ(regime_of(fig4(400.0)), Regime::critical);
  EXPECT_EQ(regime_of(fig4(400.0 * (1 + 1e-9))), Regime::critical);
  EXPECT_EQ(regime_of(fig4(400.0 * (1 + 1e-5))), Regime::overdamped);
  EXPECT_EQ(to_string(Regime::overdamped), "overdamped");
}

TEST(Trajectory, ZeroDephasingMatchesOracle) {
  Sampler s(3);
  expect_matches_oracle(fig2(), ObservableCoeffs::acceptor(), 0.1, 1e-8);
  expect_matches_oracle(fig2(), random_coeffs(s), 0.1, 1e-8);
}

TEST(Trajectory, ZeroDetuningMatchesOracle) {
  Sampler s(4);
  for (double gp : {50.0, 500.0}) {
    expect_matches_oracle(fig4(gp), ObservableCoeffs::acceptor(), 0.1, 1e-8);
    expect_matches_oracle(fig4(gp), random_coeffs(s), 0.1, 1e-8);
  }
}

TEST(Trajectory, ContinuousAcrossCriticalBand) {
  for (double gp : {400.0, 400.0 * (1 + 1e-8), 400.0 * (1 - 1e-8), 400.0 * (1 + 2e-6), 400.0 * (1 - 2e-6)})
    expect_matches_oracle(fig4(gp), ObservableCoeffs::acceptor(), 0.05, 1e-8);
}

TEST(Trajectory, MatchesLibraryPropagation) {
  const Params p = fig2();
  const HermitianObservable m = ObservableCoeffs::acceptor().matrix();
  const RateTracker tracker(generator(p), site_dephasing(), m);
  for (const TrajectoryPoint& pt : trajectory(p, ObservableCoeffs::acceptor(), grid(0.1, 50))) {
    EXPECT_NEAR(pt.capacity, tracker.capacity(pt.t), 1e-10);
    EXPECT_NEAR(pt.rate, tracker.gamma(pt.t), 1e-8);
    EXPECT_NEAR(pt.rate, rate_closed_form(p, pt.t), 1e-9);
  }
}

TEST(Trajectory, NoGroundExcitedCoherence) {
  Sampler s(5);
  const Params p = fig4(50.0);
  for (double t : {0.01, 0.05}) {
    const HermitianObservable x = heisenberg(generator(p), random_coeffs(s).matrix(), t);
    EXPECT_LT(std::abs(x.matrix()(kG, kD)), 1e-14);
    EXPECT_LT(std::abs(x.matrix()(kG, kA)), 1e-14);
  }
}

TEST(Trajectory, RequiresSolvableCase) {
  Params p = fig4(50.0);
  p.detuning = 10.0;
  EXPECT_THROW(trajectory(p, ObservableCoeffs::acceptor(), {0.1}), PreconditionError);
  p = fig2();
  p.decay_acceptor = 1.0;
  EXPECT_THROW(trajectory(p, ObservableCoeffs::acceptor(), {0.1}), PreconditionError);
}

TEST(Ode, ZeroDephasingSpectrum) {
  const Params p = fig2();
  const Eigen::ComplexEigenSolver<Matrix> es(ode_matrix(p).cast<Complex>());
  const auto expected = zero_dephasing_eigenvalues(p);
  for (const Complex& e : expected) {
    double best = 1e300;
    for (Index k = 0; k < 4; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - e));
    EXPECT_LT(best, 1e-9);
  }
}

TEST(Resonance, ClosedFormsAgree) {
  Params p = fig4(0.0);
  for (double t : grid(0.1, 40)) {
    const TrajectoryPoint pt = analytic_zero_detuning(p, ObservableCoeffs::acceptor(), t);
    EXPECT_NEAR(resonance_capacity(p, t), pt.capacity, 1e-13);
    EXPECT_NEAR(resonance_rate(p, t), pt.rate, 1e-10);
  }
  const ResonanceBounds r = resonance_bounds(p, 0.0, 0.1, 1.0);
  const ClosedFormBounds c = bounds_closed_form(p, ObservableCoeffs::acceptor(), 0.0, 0.1, 1.0);
  EXPECT_NEAR(r.variation_bound, c.variation_bound, 1e-10);
  EXPECT_NEAR(r.feasibility_ceiling, c.feasibility_ceiling, 1e-10);
  EXPECT_NEAR(r.feasibility_ceiling, 100.0 / 5.0 * std::sqrt(1 + 25.0 / 40000.0), 1e-12);
}

TEST(Bounds, EnvelopeDominatesRatePointwise) {
  Sampler s(6);
  for (int i = 0; i < 10; ++i) {
    Params p;
    p.coupling = 10.0 + 100.0 * s.uniform();
    p.decay_donor = p.decay_acceptor = 10.0 * s.uniform() + 0.1;
    p.dephasing_rate = 800.0 * s.uniform();
    if (regime_of(p) == Regime::critical) continue;
    const ObservableCoeffs c = random_coeffs(s);
    const ClosedFormBounds b = bounds_closed_form(p, c, 0.0, 0.2, 0.0);
    const double xi = p.dephasing_rate + p.decay_donor;
    for (double t : grid(0.2, 400)) {
      const double rate = analytic_zero_detuning(p, c, t).rate;
      const double envelope = std::abs(c.nu.real()) * xi * std::exp(-xi * t) + b.envelope * std::exp(-b.decay * t);
      EXPECT_LE(rate, envelope + 1e-9) << "i=" << i << " t=" << t;
    }
  }
}

TEST(Bounds, ChainOrderingBothRegimes) {
  for (double gp : {50.0, 500.0}) {
    const Params p = fig4(gp);
    const ObservableCoeffs c = ObservableCoeffs::acceptor();
    const std::vector<double> ts = grid(0.1, 200);
    const double c0 = analytic_zero_detuning(p, c, 0.0).capacity;
    for (double t : ts) {
      const double dc = std::abs(analytic_zero_detuning(p, c, t).capacity - c0);
      const double integral = integrate_rate([&](double x) { return analytic_zero_detuning(p, c, x).rate; }, 0.0, t);
      EXPECT_LE(dc, integral + 1e-9);
      EXPECT_LE(integral, bounds_closed_form(p, c, 0.0, t, 0.0).variation_bound + 1e-9);
    }
  }
}

TEST(Bounds, CriticalBandRejected) {
  EXPECT_THROW(bounds_closed_form(fig4(400.0), ObservableCoeffs::acceptor(), 0.0, 0.1, 0.0), PreconditionError);
}

TEST(Bounds, MinTimeAndFeasibility) {
  const Params p = fig4(50.0);
  const ClosedFormBounds b = bounds_closed_form(p, ObservableCoeffs::acceptor(), 0.0, 1.0, 0.2);
  ASSERT_TRUE(b.min_time.has_value());
  EXPECT_TRUE(b.feasible);
  // At the minimal time the uniform bound equals the target.
  const ClosedFormBounds at = bounds_closed_form(p, ObservableCoeffs::acceptor(), 0.0, *b.min_time, 0.2);
  EXPECT_NEAR(at.variation_bound, 0.2, 1e-12);
  const ClosedFormBounds far = bounds_closed_form(p, ObservableCoeffs::acceptor(), 0.0, 1.0, 1e3);
  EXPECT_FALSE(far.feasible);
  EXPECT_TRUE(std::isinf(*far.min_time));
}

TEST(NormBound, DominatesEstimate) {
  Sampler s(7);
  for (int i = 0; i < 5; ++i) {
    Params p;
    p.detuning = 200.0 * s.uniform() - 100.0;
    p.coupling = 100.0 * s.uniform() + 1.0;
    p.decay_donor = p.decay_acceptor = 10.0 * s.uniform();
    const double bound = std::sqrt(4 * p.coupling * p.coupling + p.detuning * p.detuning) + 4 * p.decay_donor;
    EXPECT_NEAR(generator_norm_bound(p), bound, 1e-10);
    const double est = induced_one_norm(generator(p).liouville()).value;
    EXPECT_LE(est, bound * (1 + 1e-12));
    EXPECT_GE(est, 0.3 * bound);
  }
}

// Chain and generator step compared on inputs in span{|g><g|, |j><k| : j, k in {D, A}}.
double block_sector_error(const Params& p, double dt) {
  Matrix gauge = Matrix::Identity(3, 3);
  gauge(kA, kA) = Complex(0.0, 1.0);
  const SuperOperator s = QuantumChannel::unitary(gauge).superop();
  Params q = p.with_step(dt);
  q.theta = -p.coupling * dt;
  const Matrix diff = (s * kraus_chain(q).superop() * s.adjoint()).liouville() -
                      propagate(generator(p), dt).superop().liouville();
  double worst = 0.0;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      if ((i == kG) == (j == kG)) worst = std::max(worst, diff.col(i * 3 + j).cwiseAbs().maxCoeff());
  return worst;
}

TEST(Splitting, ChainApproximatesGeneratorStep) {
  // On resonance the chain with theta = -J dt reproduces exp(dt L) to first order, up to the gauge diag(1, 1, i).
  Params p = fig4(50.0);
  p.decay_acceptor = 3.0;
  const double e1 = block_sector_error(p, 1e-4), e2 = block_sector_error(p, 5e-5);
  EXPECT_LT(e1, 1e-3);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

TEST(Splitting, GroundCoherenceDephasesAtQuarterRate) {
  // The phase-damping Kraus pair scales |g><D| by sqrt((1 + eta) / 2), i.e. rate gamma_phi / 4 rather than
  // the generator's gamma_phi / 2.
  Params p;
  p.dephasing_rate = 40.0;
  const double dt = 1e-4;
  Params q = p.with_step(dt);
  const Complex chain = kraus_chain(q).apply(unit(kG, kD))(kG, kD);
  const Complex exact = propagate(generator(p), dt).apply(unit(kG, kD))(kG, kD);
  EXPECT_NEAR(chain.real(), std::sqrt(0.5 * (1 + std::exp(-p.dephasing_rate * dt))), 1e-15);
  EXPECT_NEAR(exact.real(), std::exp(-0.5 * p.dephasing_rate * dt), 1e-12);
}

}  // namespace
}  // namespace qres::dimer
