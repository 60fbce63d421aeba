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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qres/decomposition.hpp"
#include "qres/donor_acceptor.hpp"

namespace {

using namespace qres;
namespace da = qres::dimer;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; non-positive means none
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> ts;
  for (int k = 0; k < n; ++k) ts.push_back(a + (b - a) * k / (n - 1));
  return ts;
}

da::Params fig2() {
  da::Params p;
  p.detuning = 130.0;
  p.coupling = 100.0;
  p.decay_donor = p.decay_acceptor = 5.0;
  return p;
}

da::Params fig4(double dephasing) {
  da::Params p;
  p.coupling = 100.0;
  p.decay_donor = p.decay_acceptor = 5.0;
  p.dephasing_rate = dephasing;
  return p;
}

LindbladGenerator random_gkls(Sampler& s, Index d) {
  std::vector<JumpOperator> jumps;
  for (int k = 0; k < 2; ++k) jumps.push_back({s.ginibre(d, d) * 0.5, s.uniform()});
  return LindbladGenerator::build_gkls(s.hermitian(d), jumps);
}

// Cumulative integral of gamma over consecutive grid cells.
std::vector<double> cumulative_integral(const RateTracker& tracker, const std::vector<double>& ts, double tol) {
  std::vector<double> acc{0.0};
  QuadratureOptions q;
  q.tolerance = tol / static_cast<double>(ts.size());
  q.scan_points = 4;
  for (std::size_t k = 1; k < ts.size(); ++k)
    acc.push_back(acc.back() + integrate_rate([&](double t) { return tracker.gamma(t); }, ts[k - 1], ts[k], q));
  return acc;
}

Outcome criterion1() {
  const ResourceDestroyingMap g = da::site_dephasing();
  const HermitianObservable m = da::ObservableCoeffs::acceptor().matrix(true);
  double worst = 0.0;
  double at_quarter = 0.0;
  for (int k = 0; k <= 180; ++k) {
    const double theta = kPi * k / 180;
    const double spectral = capacity(QuantumChannel::unitary(da::unitary_theta(theta)), g, m).capacity;
    worst = std::max(worst, std::abs(spectral - 0.5 * std::abs(std::sin(2 * theta))));
    if (k == 45) at_quarter = spectral;
  }
  return {worst < 1e-10 && std::abs(at_quarter - 0.5) < 1e-10,
          "181 angles, max diff " + fmt(worst) + ", C(pi/4) = " + fmt(at_quarter)};
}

Outcome criterion2() {
  Sampler s(2002);
  const ResourceDestroyingMap g = da::site_dephasing();
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    da::Params p;
    p.theta = 2 * kPi * s.uniform();
    p.eta = s.uniform();
    p.p_donor = s.uniform();
    p.p_acceptor = s.uniform();
    const bool real_nu = i % 2 == 0;
    da::ObservableCoeffs c{s.uniform(), s.uniform(), s.uniform(),
                           Complex(s.uniform() - 0.5, real_nu ? 0.0 : s.uniform() - 0.5)};
    const QuantumChannel chain = da::kraus_chain(p);
    const double spectral = capacity(chain, g, c.matrix()).capacity;
    worst = std::max(worst, std::abs(da::capacity_closed_form(p, c) - spectral));
    if (real_nu) {
      // Printed general-M form.
      const double printed = std::abs(
          std::cos(2 * p.theta) * p.eta * c.nu.real() * std::sqrt((1 - p.p_donor) * (1 - p.p_acceptor)) +
          0.5 * std::sin(2 * p.theta) *
              (c.mu_a * (1 - p.p_acceptor) - c.mu_d * (1 - p.p_donor) + c.mu_g * (p.p_acceptor - p.p_donor)));
      worst = std::max(worst, std::abs(printed - spectral));
    }
    const double acceptor = capacity(chain, g, da::ObservableCoeffs::acceptor().matrix()).capacity;
    worst = std::max(worst, std::abs(acceptor - 0.5 * (1 - p.p_acceptor) * std::abs(std::sin(2 * p.theta))));
  }
  return {worst < 1e-10, "500 draws, max diff " + fmt(worst)};
}

Outcome criterion3() {
  Sampler s(3003);
  double worst = 0.0;
  const std::vector<da::Params> cases{fig2(), fig4(50.0), fig4(500.0)};
  for (const da::Params& p : cases) {
    const LindbladGenerator gen = da::generator(p);
    for (const da::ObservableCoeffs& c :
         {da::ObservableCoeffs::acceptor(),
          da::ObservableCoeffs{s.uniform(), s.uniform(), s.uniform(), Complex(s.uniform() - 0.5, s.uniform() - 0.5)}}) {
      const HermitianObservable m = c.matrix();
      for (const da::TrajectoryPoint& pt : da::trajectory(p, c, grid(0.0, 0.5, 200))) {
        const Matrix x = heisenberg(gen, m, pt.t).matrix();
        worst = std::max({worst, std::abs(pt.u - x(da::kD, da::kA).real()),
                          std::abs(pt.v - x(da::kD, da::kA).imag()), std::abs(pt.x_d - x(da::kD, da::kD).real()),
                          std::abs(pt.x_a - x(da::kA, da::kA).real()),
                          std::abs(pt.capacity - std::abs(x(da::kD, da::kA)))});
      }
    }
  }
  return {worst < 1e-8, "3 parameter sets x 2 observables x 200 points, max error " + fmt(worst)};
}

Outcome criterion4() {
  double worst = -1e300;
  int pairs = 0;
  const auto check_pairs = [&](const RateTracker& tracker, const std::vector<double>& ts) {
    std::vector<double> c;
    for (double t : ts) c.push_back(tracker.capacity(t));
    const std::vector<double> integral = cumulative_integral(tracker, ts, 1e-10);
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        worst = std::max(worst, std::abs(c[j] - c[i]) - (integral[j] - integral[i]));
        ++pairs;
      }
  };
  const da::Params p = fig2();
  check_pairs(RateTracker(da::generator(p), da::site_dephasing(), da::ObservableCoeffs::acceptor().matrix()),
              grid(0.0, 0.5, 200));
  Sampler s(4004);
  for (int i = 0; i < 100; ++i) {
    const Index d = 2 + i % 2;
    check_pairs(RateTracker(random_gkls(s, d), make_dephasing(d), s.hermitian(d)), grid(0.0, 2.0, 25));
  }
  return {worst <= 1e-8, std::to_string(pairs) + " ordered pairs, max (|dC| - integral) " + fmt(worst)};
}

Outcome criterion5() {
  bool ok = true;
  double worst = -1e300;
  std::ostringstream tags;
  const da::ObservableCoeffs acceptor = da::ObservableCoeffs::acceptor();
  const std::vector<double> ts = grid(0.0, 0.5, 200);
  struct Case {
    da::Params p;
    std::string expected;
  };
  for (const Case& cs : {Case{fig4(0.0), "underdamped"}, Case{fig4(50.0), "underdamped"},
                         Case{fig4(500.0), "overdamped"}}) {
    const da::Params& p = cs.p;
    const std::string tag = da::to_string(da::regime_of(p));
    tags << " gamma_phi=" << p.dephasing_rate << ":" << tag;
    if (tag != cs.expected) ok = false;
    const RateTracker tracker(da::generator(p), da::site_dephasing(), acceptor.matrix());
    const std::vector<double> integral = cumulative_integral(tracker, ts, 1e-10);
    const double c0 = tracker.capacity(0.0);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double dc = std::abs(tracker.capacity(ts[k]) - c0);
      const double uniform = p.dephasing_rate == 0.0 ? da::resonance_bounds(p, 0.0, ts[k], 0.0).variation_bound
                                                     : da::bounds_closed_form(p, acceptor, 0.0, ts[k], 0.0).variation_bound;
      worst = std::max({worst, dc - integral[k], integral[k] - uniform});
    }
  }
  ok = ok && worst <= 1e-9;
  return {ok, "max violation " + fmt(worst) + ";" + tags.str()};
}

Outcome criterion6() {
  Sampler s(6006);
  const da::ObservableCoeffs acceptor = da::ObservableCoeffs::acceptor();
  int above_hits = 0;
  int below_violations = 0;
  int below_checked = 0;
  std::ostringstream info;
  for (const da::Params& p : {fig4(0.0), fig4(50.0), fig4(500.0)}) {
    const double t_end = 50.0 / p.decay_donor;
    const std::vector<double> ts = grid(0.0, t_end, 200001);
    std::vector<double> change;
    const double c0 = da::analytic_zero_detuning(p, acceptor, 0.0).capacity;
    double max_change = 0.0;
    for (double t : ts) {
      change.push_back(std::abs(da::analytic_zero_detuning(p, acceptor, t).capacity - c0));
      max_change = std::max(max_change, change.back());
    }
    const auto ceiling_and_min_time = [&](double target) -> std::pair<double, double> {
      if (p.dephasing_rate == 0.0) {
        const da::ResonanceBounds b = da::resonance_bounds(p, 0.0, t_end, target);
        return {b.feasibility_ceiling, b.min_time};
      }
      const da::ClosedFormBounds b = da::bounds_closed_form(p, acceptor, 0.0, t_end, target);
      return {b.feasibility_ceiling, *b.min_time};
    };
    const double ceiling = ceiling_and_min_time(0.0).first;
    info << " ceiling(" << p.dephasing_rate << ")=" << fmt(ceiling);
    for (int i = 0; i < 50; ++i) {
      const double target = ceiling * (1.0 + s.uniform());
      if (max_change >= target) ++above_hits;
    }
    for (int i = 0; i < 50; ++i) {
      const double target = std::min(ceiling, max_change) * (0.01 + 0.98 * s.uniform());
      const double min_time = ceiling_and_min_time(target).second;
      for (std::size_t k = 0; k < ts.size(); ++k) {
        if (change[k] >= target) {
          ++below_checked;
          if (min_time > ts[k]) ++below_violations;
          break;
        }
      }
    }
  }
  return {above_hits == 0 && below_violations == 0 && below_checked == 150,
          "150 targets above: " + std::to_string(above_hits) + " attained; " + std::to_string(below_checked) +
              " below: " + std::to_string(below_violations) + " min-time violations;" + info.str()};
}

Outcome criterion7() {
  Sampler s(7007);
  const ResourceDestroyingMap g = da::site_dephasing();
  double worst_pi = -1e300;
  double worst_split = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const QuantumChannel lambda = random_channel(s, 3, 1 + i % 3);
    const HermitianObservable m = s.hermitian(3);
    const double c = capacity(lambda, g, m).capacity;
    worst_pi = std::max(worst_pi, pi_advantage(lambda.superop(), g.free_extreme_points(), m) - c);
    const CapacityEquality eq = capacity_equality_check(lambda.superop(), g, m);
    worst_split = std::max({worst_split, std::abs(eq.full - eq.res), std::abs(eq.full - eq.res_tilde)});
  }
  return {worst_pi <= 1e-10 && worst_split <= 1e-10,
          "1000 channels, max (Pi - C) " + fmt(worst_pi) + ", max split diff " + fmt(worst_split)};
}

Outcome criterion8() {
  Sampler s(8008);
  double worst = -1e300;
  double worst_identity = 0.0;
  const auto note = [&](double v) { worst = std::max(worst, v); };
  const auto note_identity = [&](double v) { worst_identity = std::max(worst_identity, v); };
  for (int i = 0; i < 500; ++i) {
    const Index d = 2 + i % 2;
    const ResourceDestroyingMap g = make_dephasing(d);
    const QuantumChannel l1 = random_channel(s, d, 2), l2 = random_channel(s, d, 2);
    const HermitianObservable m = s.hermitian(d);

    // Convexity in the channel.
    const double p = s.uniform();
    const SuperOperator mixed = p * l1.superop() + (1 - p) * l2.superop();
    note(capacity(mixed, g, m).capacity - p * capacity(l1, g, m).capacity - (1 - p) * capacity(l2, g, m).capacity);

    // Seminorm in the observable.
    const HermitianObservable m2 = s.hermitian(d);
    const double a = 4 * s.uniform() - 2, b = 4 * s.uniform() - 2;
    const HermitianObservable comb(a * m.matrix() + b * m2.matrix());
    note(capacity(l1, g, comb).capacity - std::abs(a) * capacity(l1, g, m).capacity -
         std::abs(b) * capacity(l1, g, m2).capacity);
    note_identity(std::abs(capacity(l1, g, HermitianObservable(a * m.matrix())).capacity -
                           std::abs(a) * capacity(l1, g, m).capacity));

    // Pullback identity.
    const HermitianObservable pulled(hermitian_part(l2.adjoint_apply(m.matrix())));
    const double composed = capacity(compose(l2, l1), g, m).capacity;
    note_identity(std::abs(composed - capacity(l1, g, pulled).capacity));

    // Post-processing.
    const HermitianObservable delta(pulled.matrix() - m.matrix());
    const double base = capacity(l1, g, m).capacity;
    note(composed - base - capacity(l1, g, delta).capacity);
    note(composed - base - op_norm(delta.matrix()) * resource_radius(g, 8).value);

    // Pre-processing with a mixture of G-commuting unitaries.
    std::vector<QuantumChannel> covariant;
    for (int k = 0; k < 3; ++k) {
      Matrix u = Matrix::Zero(d, d);
      const Index shift = s.uniform() < 0.5 ? 0 : 1;
      for (Index r = 0; r < d; ++r) u((r + shift) % d, r) = std::polar(1.0, 2 * kPi * s.uniform());
      covariant.push_back(QuantumChannel::unitary(u));
    }
    const double w0 = s.uniform(), w1 = s.uniform(), w2 = s.uniform();
    const std::vector<double> w{w0 / (w0 + w1 + w2), w1 / (w0 + w1 + w2), 1.0 - (w0 + w1) / (w0 + w1 + w2)};
    note(capacity(compose(l2, mix(w, covariant)), g, m).capacity - capacity(l2, g, m).capacity);

    // Classical coarse-graining of a three-outcome POVM into two outcomes.
    const Matrix e0 = 0.5 * s.povm_element(d).matrix();
    const Matrix e1 = 0.5 * s.povm_element(d).matrix();
    const std::vector<Matrix> povm{e0, e1, Matrix::Identity(d, d) - e0 - e1};
    std::vector<double> c;
    for (const Matrix& e : povm) c.push_back(capacity(l1, g, HermitianObservable(hermitian_part(e))).capacity);
    for (int j = 0; j < 2; ++j) {
      double col[3];
      Matrix coarse = Matrix::Zero(d, d);
      double bound = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double v0 = s.uniform();
        col[k] = j == 0 ? v0 : 1.0 - v0;
        coarse += col[k] * povm[k];
        bound += col[k] * c[k];
      }
      note(capacity(l1, g, HermitianObservable(hermitian_part(coarse))).capacity - bound);
    }
  }
  return {worst <= 1e-10 && worst_identity <= 1e-11, "500 instances per property, max inequality violation " +
                                                         fmt(worst) + ", max identity error " + fmt(worst_identity)};
}

Outcome criterion9() {
  da::Params p;
  p.theta = kPi / 4;
  const QuantumChannel lambda = da::kraus_chain(p);
  const ResourceDestroyingMap g = da::site_dephasing();
  const HermitianObservable m = da::ObservableCoeffs::acceptor().matrix(true);
  const ImpactResult c = capacity(lambda, g, m);
  Sampler s(9009);
  bool ok = true;
  std::ostringstream info;
  double p_succ = 0.0;
  for (int n : {1, 10, 100, 1000}) {
    const HypothesisReport r = hypothesis_test(lambda.superop(), g, m, c.optimizer, n, 100000, s);
    p_succ = r.p_succ;
    ok = ok && std::abs(r.p_succ - 0.75) < 1e-12 && std::abs(r.p_succ - 0.5 - 0.5 * c.capacity) < 1e-12 &&
         r.within_bound();
    info << " n=" << n << ":" << fmt(r.empirical_error) << "<=" << fmt(r.hoeffding_bound + r.statistical_slack);
  }
  return {ok, "p_succ " + fmt(p_succ) + ";" + info.str()};
}

Outcome criterion10() {
  const ResourceDestroyingMap g = make_dephasing(2);
  const double omega = 2.0;
  const LindbladGenerator rabi = qubit_rabi(omega);
  const double free_gen = split_generator(rabi, g).free.liouville().cwiseAbs().maxCoeff();
  const Matrix zz = kron(pauli_z(), pauli_z()) + Matrix::Identity(4, 4);
  const Matrix flip = kron(sigma_minus(), sigma_minus()) + kron(sigma_plus(), sigma_plus());
  double worst_rabi = 0.0;
  double nontrivial = 0.0;
  for (double t : grid(0.0, 3.0, 31)) {
    const double cs = std::cos(omega * t / 2), sn = std::sin(omega * t / 2);
    const Matrix free = split_channel(propagate(rabi, t), g).free.liouville();
    worst_rabi = std::max(worst_rabi, (free - (0.5 * cs * cs * zz + sn * sn * flip)).cwiseAbs().maxCoeff());
    nontrivial = std::max(nontrivial, (free - 0.5 * zz).cwiseAbs().maxCoeff());
  }
  const bool rabi_incompatible = !compatibility_check(rabi, g, compatibility_grid(0.0, 3.0)).compatible;

  const double gx = 0.3, gy = 0.2, gz = 0.5;
  const LindbladGenerator decay = qubit_pauli_decay(gx, gy, gz);
  const Matrix printed = (gx + gy) * (flip - 0.5 * zz);
  const double worst_decay = (split_generator(decay, g).free.liouville() - printed).cwiseAbs().maxCoeff();
  const bool decay_compatible = compatibility_check(decay, g, compatibility_grid(0.0, 3.0)).compatible;
  return {free_gen < 1e-14 && worst_rabi < 1e-10 && nontrivial > 0.5 && rabi_incompatible && worst_decay < 1e-10 &&
              decay_compatible,
          "Rabi free generator " + fmt(free_gen) + ", free channel error " + fmt(worst_rabi) +
              (rabi_incompatible ? ", incompatible" : ", compatible") + "; Pauli decay error " + fmt(worst_decay) +
              (decay_compatible ? ", compatible" : ", incompatible")};
}

Outcome criterion11() {
  Sampler s(1111);
  double max_ratio = 0.0;
  double min_ratio = 1e300;
  for (int i = 0; i < 20; ++i) {
    da::Params p;
    p.detuning = 300.0 * s.uniform() - 150.0;
    p.coupling = 1.0 + 150.0 * s.uniform();
    p.decay_donor = p.decay_acceptor = 20.0 * s.uniform();
    const double bound = std::sqrt(4 * p.coupling * p.coupling + p.detuning * p.detuning) + 4 * p.decay_donor;
    const double est = induced_one_norm(da::generator(p).liouville()).value;
    max_ratio = std::max(max_ratio, est / bound);
    min_ratio = std::min(min_ratio, est / bound);
  }
  return {max_ratio <= 1.0 + 1e-12 && min_ratio >= 0.3,
          "20 draws, estimate/bound in [" + fmt(min_ratio) + ", " + fmt(max_ratio) + "]"};
}

Outcome criterion12() {
  // 1000 x 1000 grid in [0, pi) x [0, 2 pi); the trace norm of a traceless 2x2 Hermitian is 2 sqrt(a^2 + |b|^2).
  const ResourceDestroyingMap g = make_dephasing(2);
  double grid_max = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double th = kPi * i / 1000;
    for (int j = 0; j < 1000; ++j) {
      const double ph = 2 * kPi * j / 1000;
      Vector psi(2);
      psi << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
      const Matrix rho = psi * psi.adjoint();
      const Matrix diff = rho - g.apply(rho);
      grid_max = std::max(grid_max, 2 * std::sqrt(std::norm(diff(0, 0)) + std::norm(diff(0, 1))));
    }
  }
  const double r_deph = resource_radius(g).value;
  double worst_repl = 0.0;
  for (Index d = 2; d <= 3; ++d) {
    const double r = resource_radius(make_replacement(DensityOperator::maximally_mixed(d))).value;
    worst_repl = std::max(worst_repl, std::abs(r - 2.0 * (d - 1) / static_cast<double>(d)));
  }
  return {std::abs(r_deph - 1.0) <= 1e-6 && std::abs(r_deph - grid_max) <= 1e-6 && worst_repl <= 1e-6,
          "dephasing R_G " + std::to_string(r_deph) + " (grid " + std::to_string(grid_max) +
              "), replacement max diff " + fmt(worst_repl)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "theta sweep exactness", 1.0, criterion1},
      {2, "damped closed form", 10.0, criterion2},
      {3, "analytic vs Liouville propagation", 5.0, criterion3},
      {4, "variation bound", 60.0, criterion4},
      {5, "bound chain ordering", 0.0, criterion5},
      {6, "feasibility ceilings", 0.0, criterion6},
      {7, "Pi <= C and split capacity", 60.0, criterion7},
      {8, "data-processing suite", 0.0, criterion8},
      {9, "hypothesis testing", 0.0, criterion9},
      {10, "decomposition examples", 0.0, criterion10},
      {11, "generator norm certificate", 0.0, criterion11},
      {12, "resource radius", 0.0, criterion12},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.passed;
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      pass = false;
      o.detail += "; over time limit " + fmt(c.time_limit) + " s";
    }
    if (!pass) ++failed;
    std::printf("criterion %2d %s: %s [%.2f s] %s\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
