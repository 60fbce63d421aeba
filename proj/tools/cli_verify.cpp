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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "cli_commands.hpp"

namespace qres::cli {

namespace {

// Largest violation seen; a suite passes when it stays at or below its tolerance.
struct Worst {
  double value = 0.0;
  void observe(double x) {
    if (std::isnan(x)) x = std::numeric_limits<double>::infinity();
    value = std::max(value, x);
  }
};

struct Suite {
  std::string name;
  double tolerance;
  int samples;
  std::function<void(Sampler&, int, Worst&, std::string&)> body;
};

Index small_dim(Sampler& s) { return 2 + static_cast<Index>(s.uniform() * 2.0); }

QuantumChannel rand_channel(Sampler& s, Index d) { return random_channel(s, d, 1 + static_cast<Index>(s.uniform() * 3)); }

Matrix diag_phase_unitary(Sampler& s, Index d) {
  Matrix u = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) u(i, i) = std::polar(1.0, 2.0 * 3.141592653589793 * s.uniform());
  return u;
}

Matrix cyclic_shift(Index d) {
  Matrix p = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) p((i + 1) % d, i) = 1.0;
  return p;
}

std::vector<HermitianObservable> random_povm(Sampler& s, Index d, int k) {
  std::vector<Matrix> a;
  Matrix sum = Matrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    const Matrix g = s.ginibre(d, d);
    a.push_back(g * g.adjoint());
    sum += a.back();
  }
  const Eigensystem es = eig_hermitian(sum);
  const Matrix inv_sqrt =
      es.vectors * es.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * es.vectors.adjoint();
  std::vector<HermitianObservable> out;
  for (const Matrix& x : a) out.emplace_back(hermitian_part(inv_sqrt * x * inv_sqrt), true);
  return out;
}

LindbladGenerator random_gkls(Sampler& s, Index d) {
  std::vector<JumpOperator> jumps;
  for (int k = 0; k < 2; ++k) jumps.push_back({s.ginibre(d, d) * 0.5, s.uniform()});
  return LindbladGenerator::build_gkls(s.hermitian(d), jumps);
}

std::vector<Suite> library_suites() {
  std::vector<Suite> suites;

  suites.push_back({"hermitian operator norm", 1e-12, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const HermitianObservable a = s.hermitian(small_dim(s) + 1);
                        const Eigen::JacobiSVD<Matrix> svd(a.matrix());
                        w.observe(std::abs(op_norm(a.matrix()) - svd.singularValues()(0)) /
                                  entry_scale(a.matrix()));
                      }
                    }});

  suites.push_back({"row-stacking identity", 1e-12, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s) + 1;
                        const Matrix a = s.ginibre(d, d), x = s.ginibre(d, d), b = s.ginibre(d, d);
                        const Vector lhs = vec(a * x * b);
                        w.observe((lhs - kron(a, b.transpose()) * vec(x)).cwiseAbs().maxCoeff() /
                                  std::max(1.0, lhs.cwiseAbs().maxCoeff()));
                        w.observe((unvec(vec(x)) - x).cwiseAbs().maxCoeff());
                      }
                    }});

  suites.push_back({"matrix exponential", 1e-9, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const HermitianObservable h = s.hermitian(small_dim(s) + 1);
                        const double t = 3.0 * s.uniform();
                        const Eigensystem es = eig_hermitian(h);
                        Vector ph(es.values.size());
                        for (Index k = 0; k < ph.size(); ++k) ph(k) = std::polar(1.0, -es.values(k) * t);
                        const Matrix oracle = es.vectors * ph.asDiagonal() * es.vectors.adjoint();
                        const Matrix gen = Complex(0.0, -1.0) * h.matrix();
                        w.observe((matrix_exp(gen, t) - oracle).cwiseAbs().maxCoeff());
                      }
                    }});

  suites.push_back({"kraus and liouville action agree", 1e-11, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const QuantumChannel c = rand_channel(s, d);
                        const Matrix rho = s.mixed_state(d).matrix();
                        Matrix direct = Matrix::Zero(d, d);
                        for (const Matrix& k : *c.kraus()) direct += k * rho * k.adjoint();
                        w.observe((direct - c.apply(rho)).cwiseAbs().maxCoeff());
                      }
                    }});

  suites.push_back({"mixtures are channels", 1e-10, 4, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const std::vector<QuantumChannel> cs{rand_channel(s, d), rand_channel(s, d)};
                        const double p = s.uniform();
                        const std::vector<double> weights{p, 1.0 - p};
                        const CptpReport r = cptp_check(mix(weights, cs).superop());
                        w.observe(std::max(-r.min_choi_eigenvalue, r.trace_residual));
                      }
                    }});

  suites.push_back({"resource-destroying map axioms", 1e-10, 10, [](Sampler& s, int n, Worst& w, std::string& detail) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        std::vector<ResourceDestroyingMap> maps{make_dephasing(d), make_replacement(s.mixed_state(d))};
                        maps.push_back(make_twirl({Matrix::Identity(2, 2), pauli_z()}));
                        for (const auto& g : maps) {
                          const RdmReport r = verify_rdm(g, 10, static_cast<std::uint64_t>(s.uniform() * 1e9));
                          w.observe(std::max({r.idempotence_residual, r.fixed_point_residual, r.linearity_residual}));
                          if (!r.passed()) {
                            detail = g.label() + " failed";
                            w.observe(1.0);
                          }
                        }
                      }
                    }});

  suites.push_back({"resource radius at most 2", 0.0, 20, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        w.observe(resource_radius(make_replacement(s.mixed_state(d)), 8).value - 2.0);
                        w.observe(resource_radius(make_dephasing(d), 8).value - 2.0);
                      }
                    }});

  suites.push_back({"free-state advantage below capacity", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel c = rand_channel(s, d);
                        const HermitianObservable m = s.hermitian(d);
                        w.observe(pi_advantage(c.superop(), g.free_extreme_points(), m) - capacity(c, g, m).capacity);
                      }
                    }});

  suites.push_back({"heisenberg pullback identity", 1e-11, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel l1 = rand_channel(s, d), l2 = rand_channel(s, d);
                        const HermitianObservable m = s.hermitian(d);
                        const double lhs = capacity(compose(l2, l1), g, m).capacity;
                        const double rhs = capacity(l1, g, l2.adjoint_apply(m)).capacity;
                        w.observe(std::abs(lhs - rhs));
                      }
                    }});

  suites.push_back({"post-processing bound", 1e-10, 4, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel l1 = rand_channel(s, d), l2 = rand_channel(s, d);
                        const HermitianObservable m = s.hermitian(d);
                        const HermitianObservable dm(l2.adjoint_apply(m.matrix()) - m.matrix());
                        const double lhs = capacity(compose(l2, l1), g, m).capacity;
                        const double base = capacity(l1, g, m).capacity;
                        w.observe(lhs - base - capacity(l1, g, dm).capacity);
                        w.observe(lhs - base - op_norm(dm.matrix()) * resource_radius(g, 8).value);
                      }
                    }});

  suites.push_back({"covariant pre-processing", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const std::vector<QuantumChannel> us{
                            QuantumChannel::unitary(diag_phase_unitary(s, d)),
                            QuantumChannel::unitary(cyclic_shift(d) * diag_phase_unitary(s, d))};
                        const double p = s.uniform();
                        const std::vector<double> weights{p, 1.0 - p};
                        const QuantumChannel l1 = mix(weights, us);
                        const QuantumChannel l2 = rand_channel(s, d);
                        const HermitianObservable m = s.hermitian(d);
                        w.observe(capacity(compose(l2, l1), g, m).capacity - capacity(l2, g, m).capacity);
                      }
                    }});

  suites.push_back({"classical coarse-graining", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel c = rand_channel(s, d);
                        const int k = 3, kk = 2;
                        const auto povm = random_povm(s, d, k);
                        RealMatrix v(kk, k);
                        for (int col = 0; col < k; ++col) {
                          double sum = 0.0;
                          for (int row = 0; row < kk; ++row) sum += (v(row, col) = s.uniform());
                          v.col(col) /= sum;
                        }
                        std::vector<double> caps;
                        for (const auto& m : povm) caps.push_back(capacity(c, g, m).capacity);
                        for (int row = 0; row < kk; ++row) {
                          Matrix mt = Matrix::Zero(d, d);
                          double rhs = 0.0;
                          for (int col = 0; col < k; ++col) {
                            mt += v(row, col) * povm[col].matrix();
                            rhs += v(row, col) * caps[col];
                          }
                          w.observe(capacity(c, g, HermitianObservable(mt)).capacity - rhs);
                        }
                      }
                    }});

  suites.push_back({"convexity in the channel", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const std::vector<QuantumChannel> cs{rand_channel(s, d), rand_channel(s, d)};
                        const double p = s.uniform();
                        const std::vector<double> weights{p, 1.0 - p};
                        const HermitianObservable m = s.hermitian(d);
                        w.observe(capacity(mix(weights, cs), g, m).capacity - p * capacity(cs[0], g, m).capacity -
                                  (1 - p) * capacity(cs[1], g, m).capacity);
                      }
                    }});

  suites.push_back({"seminorm in the observable", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel c = rand_channel(s, d);
                        const HermitianObservable m1 = s.hermitian(d), m2 = s.hermitian(d);
                        const double a = 4 * s.uniform() - 2, b = 4 * s.uniform() - 2;
                        const double c1 = capacity(c, g, m1).capacity, c2 = capacity(c, g, m2).capacity;
                        const HermitianObservable sum(a * m1.matrix() + b * m2.matrix());
                        w.observe(capacity(c, g, sum).capacity - std::abs(a) * c1 - std::abs(b) * c2);
                        w.observe(std::abs(capacity(c, g, HermitianObservable(a * m1.matrix())).capacity -
                                           std::abs(a) * c1));
                      }
                    }});

  suites.push_back({"lipschitz in the channel", 1e-9, 10, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const QuantumChannel l1 = rand_channel(s, d), l2 = rand_channel(s, d);
                        const HermitianObservable m = s.hermitian(d);
                        const double diff =
                            std::abs(capacity(l1, g, m).capacity - capacity(l2, g, m).capacity);
                        const double norm = induced_one_norm(l1.superop() - l2.superop(), 8).value;
                        w.observe(diff - 2.0 * op_norm(m.matrix()) * static_cast<double>(d) * norm);
                      }
                    }});

  suites.push_back({"resource blindness", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const SuperOperator blind = rand_channel(s, d).superop() * g.superop();
                        w.observe(capacity(blind, g, s.hermitian(d)).capacity);
                      }
                    }});

  suites.push_back({"variation bound", 1e-8, 20, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const LindbladGenerator gen = random_gkls(s, d);
                        const ResourceDestroyingMap g = make_dephasing(d);
                        const RateTracker tr(gen, g, s.hermitian(d));
                        const int pts = 21;
                        std::vector<double> c(pts), cum(pts, 0.0);
                        QuadratureOptions q;
                        q.scan_points = 8;
                        for (int k = 0; k < pts; ++k) {
                          const double t = 0.1 * k;
                          c[k] = tr.capacity(t);
                          if (k) cum[k] = cum[k - 1] + integrate_rate([&](double x) { return tr.gamma(x); }, t - 0.1, t, q);
                        }
                        for (int a = 0; a < pts; ++a)
                          for (int b = a + 1; b < pts; ++b) w.observe(std::abs(c[b] - c[a]) - (cum[b] - cum[a]));
                      }
                    }});

  suites.push_back({"heisenberg duality", 1e-9, 4, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const LindbladGenerator gen = random_gkls(s, d);
                        const double t = 2.0 * s.uniform();
                        const HermitianObservable m = s.hermitian(d);
                        const Matrix rho = s.mixed_state(d).matrix();
                        const QuantumChannel ch = propagate(gen, t);
                        const Complex lhs = (m.matrix() * ch.apply(rho)).trace();
                        const Complex rhs = (heisenberg(gen, m, t).matrix() * rho).trace();
                        w.observe(std::abs(lhs - rhs));
                        const CptpReport r = cptp_check(ch.superop());
                        w.observe(std::max(-r.min_choi_eigenvalue, r.trace_residual));
                      }
                    }});

  suites.push_back({"capacity of the resourceful part", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const Index d = small_dim(s);
                        const CapacityEquality ce =
                            capacity_equality_check(rand_channel(s, d).superop(), make_dephasing(d), s.hermitian(d));
                        w.observe(std::max({ce.full, ce.res, ce.res_tilde}) - std::min({ce.full, ce.res, ce.res_tilde}));
                      }
                    }});

  suites.push_back({"non-generating implies compatible", 1e-9, 20, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        const LindbladGenerator gen = qubit_pauli_decay(s.uniform(), s.uniform(), s.uniform());
                        const ResourceDestroyingMap g = make_dephasing(2);
                        if (!cross_block_flags(gen.liouville(), g).non_generating) {
                          w.observe(1.0);
                          continue;
                        }
                        w.observe(compatibility_check(gen, g, compatibility_grid(0.0, 2.0)).max_residual);
                      }
                    }});

  suites.push_back({"dimer closed-form capacity", 1e-10, 1, [](Sampler& s, int n, Worst& w, std::string&) {
                      const ResourceDestroyingMap g = dimer::site_dephasing();
                      for (int i = 0; i < n; ++i) {
                        dimer::Params p;
                        p.theta = 2 * 3.141592653589793 * s.uniform();
                        p.eta = s.uniform();
                        p.p_donor = s.uniform();
                        p.p_acceptor = s.uniform();
                        const dimer::ObservableCoeffs m{s.uniform(), s.uniform(), s.uniform(),
                                                        Complex(s.normal(), s.normal()) * 0.3};
                        w.observe(std::abs(dimer::capacity_closed_form(p, m) -
                                           capacity(dimer::kraus_chain(p), g, m.matrix()).capacity));
                      }
                    }});

  suites.push_back({"dimer analytic trajectories", 1e-8, 10, [](Sampler& s, int n, Worst& w, std::string&) {
                      for (int i = 0; i < n; ++i) {
                        dimer::Params p;
                        p.coupling = 20 * s.uniform() - 10;
                        p.decay_donor = p.decay_acceptor = 2 * s.uniform();
                        if (i % 2) {
                          p.detuning = 20 * s.uniform() - 10;
                        } else {
                          p.dephasing_rate = 60 * s.uniform();
                        }
                        const dimer::ObservableCoeffs m{s.uniform(), s.uniform(), s.uniform(),
                                                        Complex(s.normal(), s.normal()) * 0.3};
                        const LindbladGenerator gen = dimer::generator(p);
                        for (double t : {0.0, 0.05, 0.3, 1.0}) {
                          const auto pt = dimer::trajectory(p, m, {t}).front();
                          const Matrix x = heisenberg(gen, m.matrix(), t).matrix();
                          w.observe(std::abs(x(dimer::kD, dimer::kA) - Complex(pt.u, pt.v)));
                          w.observe(std::abs((x(dimer::kA, dimer::kA) - x(dimer::kD, dimer::kD)).real() - pt.s));
                          w.observe(std::abs(x(dimer::kG, dimer::kD)) + std::abs(x(dimer::kG, dimer::kA)));
                        }
                      }
                    }});
  return suites;
}

// Checks on the configured model, including the Kraus completeness negative control.
std::vector<SuiteResult> model_suites(const RunConfig& cfg, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  const bool has_channel = cfg.model.type == ModelType::dimer || !cfg.model.kraus.empty();
  if (has_channel) {
    std::vector<Matrix> ks;
    if (cfg.model.type == ModelType::dimer) {
      const Matrix u = dimer::unitary_theta(cfg.model.dimer.theta);
      for (const Matrix& k : dimer::damping_kraus(cfg.model.dimer)) ks.push_back(k * u);
    } else {
      ks = cfg.model.kraus;
    }
    if (cfg.run.inject_broken_kraus) ks.front() *= 1.05;
    const Index d = ks.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& k : ks) sum += k.adjoint() * k;
    SuiteResult r{"configured kraus completeness", false, (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1,
                  seed, ""};
    r.passed = r.worst <= 1e-12;
    if (!r.passed) {
      std::ostringstream os;
      os << "completeness residual max |sum K^dagger K - I| = " << format_number(r.worst);
      r.detail = os.str();
    }
    out.push_back(r);
  }
  const bool has_generator = cfg.model.type == ModelType::dimer || cfg.model.hamiltonian.has_value();
  if (has_generator) {
    SuiteResult r{"configured generator propagates to channels", true, 0.0, 8, seed, ""};
    try {
      const LindbladGenerator gen = build_generator(cfg);
      for (int k = 1; k <= 8; ++k) {
        const double t = cfg.run.t_start + (cfg.run.t_end - cfg.run.t_start) * k / 8.0;
        const CptpReport c = cptp_check(SuperOperator(gen.dim(), matrix_exp(gen.liouville().liouville(), t)));
        r.worst = std::max(r.worst, std::max(-c.min_choi_eigenvalue, c.trace_residual));
        r.passed = r.passed && c.passed();
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const RunConfig& cfg, std::uint64_t seed, int samples) {
  const std::vector<Suite> suites = library_suites();
  std::vector<SuiteResult> results(suites.size());
  parallel_for(suites.size(), [&](std::size_t k) {
    const Suite& s = suites[k];
    const std::uint64_t suite_seed = seed + 1000003ULL * k;
    Sampler sampler(suite_seed);
    Worst w;
    std::string detail;
    const int n = std::max(1, samples / s.samples);
    try {
      s.body(sampler, n, w, detail);
    } catch (const std::exception& e) {
      w.observe(std::numeric_limits<double>::infinity());
      detail = e.what();
    }
    results[k] = SuiteResult{s.name, w.value <= s.tolerance, w.value, n, suite_seed, detail};
  });
  for (auto& r : model_suites(cfg, seed)) results.push_back(r);
  return results;
}

}  // namespace qres::cli
