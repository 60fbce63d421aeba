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

#include "qres/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qres {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double filtered_norm(const ResourceDestroyingMap& g, const Matrix& x) {
  return op_norm(hermitian_part(g.filter(x)));
}

}  // namespace

LindbladGenerator::LindbladGenerator(HermitianObservable h, std::vector<JumpOperator> jumps, SuperOperator l,
                                     SuperOperator ladj)
    : h_(std::move(h)), jumps_(std::move(jumps)), l_(std::move(l)), ladj_(std::move(ladj)) {}

LindbladGenerator LindbladGenerator::build_gkls(const HermitianObservable& h, const std::vector<JumpOperator>& jumps) {
  const Index d = h.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& hm = h.matrix();
  const Complex i(0.0, 1.0);
  Matrix l = -i * (kron(hm, id) - kron(id, hm.transpose()));
  Matrix ladj = i * (kron(hm, id) - kron(id, hm.transpose()));
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const JumpOperator& j = jumps[k];
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
      std::ostringstream os;
      os << "build_gkls: negative_rate on jump " << k << " (rate " << j.rate << ")";
      throw ValidationError(os.str());
    }
    if (j.op.rows() != d || j.op.cols() != d) throw ValidationError("build_gkls: jump operator shape mismatch");
    const Matrix ldl = j.op.adjoint() * j.op;
    l += j.rate * (kron(j.op, j.op.conjugate()) - 0.5 * (kron(ldl, id) + kron(id, ldl.transpose())));
    ladj += j.rate * (kron(j.op.adjoint(), j.op.transpose()) - 0.5 * (kron(ldl, id) + kron(id, ldl.transpose())));
  }
  const double duality = (ladj - l.adjoint()).cwiseAbs().maxCoeff();
  if (duality > 1e-11 * entry_scale(l)) {
    throw NumericalError("build_gkls: adjoint Liouvillian fails duality by " + std::to_string(duality));
  }
  return LindbladGenerator(h, jumps, SuperOperator(d, l), SuperOperator(d, ladj));
}

double LindbladGenerator::gkls_scale() const {
  double s = op_norm(h_.matrix());
  for (const auto& j : jumps_) {
    const double n = op_norm(j.op);
    s += j.rate * n * n;
  }
  return s;
}

QuantumChannel propagate(const LindbladGenerator& gen, double t) {
  if (t < 0.0) throw PreconditionError("propagate: negative time");
  const Matrix e = matrix_exp(gen.liouville().liouville(), t);
  return QuantumChannel::from_superoperator(SuperOperator(gen.dim(), e), "exp(tL)", tol::kExponential);
}

HermitianObservable heisenberg(const LindbladGenerator& gen, const HermitianObservable& m, double t) {
  if (t < 0.0) throw PreconditionError("heisenberg: negative time");
  const Vector x = matrix_exp(gen.adjoint_liouville().liouville(), t) * vec(m.matrix());
  return HermitianObservable(hermitian_part(unvec(x)));
}

namespace {

Matrix rk4(const GeneratorFamily& family, double t0, double t1, long steps) {
  const Index n = family(t0).liouville().liouville().rows();
  Matrix y = Matrix::Identity(n, n);
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + h * static_cast<double>(k);
    const Matrix l0 = family(t).liouville().liouville();
    const Matrix lm = family(t + 0.5 * h).liouville().liouville();
    const Matrix l1 = family(t + h).liouville().liouville();
    const Matrix k1 = l0 * y;
    const Matrix k2 = lm * (y + 0.5 * h * k1);
    const Matrix k3 = lm * (y + 0.5 * h * k2);
    const Matrix k4 = l1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

QuantumChannel propagate(const GeneratorFamily& family, double t, const RkOptions& opts) {
  if (t < opts.t0) throw PreconditionError("propagate: final time before initial time");
  const LindbladGenerator first = family(opts.t0);
  const Index d = first.dim();
  if (t == opts.t0) return QuantumChannel::identity(d);
  double l_max = 0.0;
  if (opts.l_max) {
    l_max = *opts.l_max;
  } else {
    for (int k = 0; k <= 8; ++k) {
      const double s = opts.t0 + (t - opts.t0) * k / 8.0;
      l_max = std::max(l_max, op_norm(family(s).liouville().liouville()));
    }
  }
  const double h = std::min(1e-3, l_max > 0.0 ? 0.01 / l_max : 1e-3);
  auto steps = static_cast<long>(std::ceil((t - opts.t0) / h));
  Matrix coarse = rk4(family, opts.t0, t, steps);
  double achieved = kInf;
  for (int k = 0; k <= opts.max_halvings; ++k) {
    steps *= 2;
    Matrix fine = rk4(family, opts.t0, t, steps);
    achieved = (fine - coarse).cwiseAbs().maxCoeff();
    if (achieved <= opts.tolerance) {
      return QuantumChannel::from_superoperator(SuperOperator(d, fine), "rk4", tol::kExponential);
    }
    coarse = std::move(fine);
  }
  std::ostringstream os;
  os << "propagate: step control failed, achieved tolerance " << achieved << " > " << opts.tolerance;
  throw NumericalError(os.str());
}

Matrix rate_operator(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g, const Matrix& m) {
  const Matrix& ladj = gen.adjoint_liouville().liouville();
  const Vector x = matrix_exp(ladj, t) * (ladj * vec(m));
  return g.filter(unvec(x));
}

double gamma_rate(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g,
                  const HermitianObservable& m) {
  return op_norm(hermitian_part(rate_operator(gen, t, g, m.matrix())));
}

double gamma_rate(const QuantumChannel& lambda_t, const LindbladGenerator& gen_t, const ResourceDestroyingMap& g,
                  const HermitianObservable& m) {
  const Matrix x = lambda_t.adjoint_apply(gen_t.adjoint_apply(m.matrix()));
  return filtered_norm(g, x);
}

double gamma_rate_sampled(const LindbladGenerator& gen, double t, const StateMap& g, const HermitianObservable& m,
                          int n_samples, Sampler& sampler) {
  const SuperOperator post(gen.dim(), gen.liouville().liouville() * matrix_exp(gen.liouville().liouville(), t));
  return capacity_sampled(post, g, m, n_samples, sampler).capacity;
}

GammaZero gamma_zero_predicate(const LindbladGenerator& gen, double t, const ResourceDestroyingMap& g,
                               const HermitianObservable& m) {
  const Matrix& ladj = gen.adjoint_liouville().liouville();
  const Matrix x = hermitian_part(unvec(matrix_exp(ladj, t) * (ladj * vec(m.matrix()))));
  GammaZero r;
  r.residual = resourceful_component(subspaces(g), x);
  r.zero = r.residual < tol::kSpectral;
  r.gamma = filtered_norm(g, x);
  if (r.zero && r.gamma >= tol::kExponential) {
    std::ostringstream os;
    os << "gamma_zero_predicate: projection residual " << r.residual << " disagrees with rate " << r.gamma;
    throw NumericalError(os.str());
  }
  return r;
}

RateTracker::RateTracker(const LindbladGenerator& gen, const ResourceDestroyingMap& g, const HermitianObservable& m)
    : g_adj_(g.superop().liouville().adjoint()),
      ladj_(gen.adjoint_liouville().liouville()),
      m_(vec(m.matrix())),
      lm_(ladj_ * m_) {
  if (gen.dim() != g.dim() || gen.dim() != m.dim()) throw ValidationError("RateTracker: dimension mismatch");
}

Matrix RateTracker::filter(const Vector& x) const { return hermitian_part(unvec(x - g_adj_ * x)); }

double RateTracker::capacity(double t) const { return op_norm(filter(matrix_exp(ladj_, t) * m_)); }

double RateTracker::gamma(double t) const { return op_norm(filter(matrix_exp(ladj_, t) * lm_)); }

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double tolerance;
  int max_depth;

  double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      std::ostringstream os;
      os << "integrate_rate: no convergence on [" << a << ", " << b << "], error estimate " << std::abs(delta) / 15.0;
      throw NumericalError(os.str());
    }
    return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double panel(double a, double b, double tol) const {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return run(a, b, fa, fm, fb, whole, tol, 0);
  }
};

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int k = 0; k < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double integrate_rate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts) {
  if (b < a) return -integrate_rate(f, b, a, opts);
  if (b == a) return 0.0;
  const int n = std::max(2, opts.scan_points);
  std::vector<double> xs(n + 1);
  std::vector<double> fs(n + 1);
  for (int k = 0; k <= n; ++k) {
    xs[k] = a + (b - a) * k / n;
    fs[k] = f(xs[k]);
  }
  const double fmax = *std::max_element(fs.begin(), fs.end());
  std::vector<double> cuts{a};
  for (int k = 1; k < n; ++k) {
    if (fs[k] <= fs[k - 1] && fs[k] <= fs[k + 1] && fs[k] < 1e-2 * fmax) {
      const double kink = golden_min(f, xs[k - 1], xs[k + 1]);
      if (kink > cuts.back()) cuts.push_back(kink);
    }
  }
  cuts.push_back(b);
  const Simpson s{f, opts.tolerance, opts.max_depth};
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(n * (hi - lo) / (b - a))));
    for (int p = 0; p < panels; ++p) {
      const double pa = lo + (hi - lo) * p / panels;
      const double pb = lo + (hi - lo) * (p + 1) / panels;
      total += s.panel(pa, pb, opts.tolerance * (pb - pa) / (b - a));
    }
  }
  return total;
}

VariationResult variation_bound(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                const HermitianObservable& m, double t1, double t2, const QuadratureOptions& opts) {
  if (t2 < t1) throw PreconditionError("variation_bound: t2 < t1");
  const RateTracker tracker(gen, g, m);
  VariationResult r;
  if (t1 == t2) return r;
  r.lhs = std::abs(tracker.capacity(t2) - tracker.capacity(t1));
  r.integral = integrate_rate([&](double s) { return tracker.gamma(s); }, t1, t2, opts);
  return r;
}

std::vector<DiniRow> dini_check(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                                const HermitianObservable& m, double t, const std::vector<double>& h_list) {
  if (h_list.empty()) return {};
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (!(h_list[k] > 0.0) || (k > 0 && h_list[k] >= h_list[k - 1])) {
      throw ValidationError("dini_check: h_list must be positive and strictly decreasing");
    }
  }
  const RateTracker tracker(gen, g, m);
  const double h_max = h_list.front();
  const Matrix& ladj = gen.adjoint_liouville().liouville();
  const Vector llm = ladj * (ladj * vec(m.matrix()));
  double lip = 0.0;
  for (int k = 0; k <= 16; ++k) {
    const double s = std::max(0.0, t - h_max) + (t + h_max - std::max(0.0, t - h_max)) * k / 16.0;
    lip = std::max(lip, filtered_norm(g, unvec(matrix_exp(ladj, s) * llm)));
  }
  lip *= 2.0;
  const double c0 = tracker.capacity(t);
  const double gamma = tracker.gamma(t);
  std::vector<DiniRow> rows;
  for (double h : h_list) {
    DiniRow row;
    row.h = h;
    row.gamma = gamma;
    row.slack = lip * h;
    row.right_quotient = (tracker.capacity(t + h) - c0) / h;
    if (t - h >= 0.0) row.left_quotient = (c0 - tracker.capacity(t - h)) / h;
    row.ok = std::abs(row.right_quotient) <= gamma + row.slack + 1e-12 &&
             (!row.left_quotient || std::abs(*row.left_quotient) <= gamma + row.slack + 1e-12);
    rows.push_back(row);
  }
  return rows;
}

BoundReport time_feasibility(const LindbladGenerator& gen, const ResourceDestroyingMap& g,
                             const HermitianObservable& m, double t1, double t2, double target,
                             const BoundOptions& opts) {
  if (t2 < t1) throw PreconditionError("time_feasibility: t2 < t1");
  if (target < 0.0) throw PreconditionError("time_feasibility: negative target");
  if (opts.grid_points < 2) throw ValidationError("time_feasibility: need at least two grid points");
  BoundReport r;
  r.target = target;
  const RateTracker tracker(gen, g, m);
  const int n = opts.grid_points;
  for (int k = 0; k < n; ++k) r.time_grid.push_back(t1 + (t2 - t1) * k / (n - 1));
  for (double t : r.time_grid) {
    r.capacity_series.push_back(tracker.capacity(t));
    r.gamma_series.push_back(tracker.gamma(t));
  }
  QuadratureOptions q = opts.quadrature;
  q.scan_points = std::max(2, opts.quadrature.scan_points / (n - 1));
  const auto rate = [&](double s) { return tracker.gamma(s); };
  double acc = 0.0;
  r.variation_integral_series.push_back(0.0);
  for (int k = 1; k < n; ++k) {
    QuadratureOptions qk = q;
    qk.tolerance = opts.quadrature.tolerance / (n - 1);
    acc += integrate_rate(rate, r.time_grid[k - 1], r.time_grid[k], qk);
    r.variation_integral_series.push_back(acc);
  }

  r.r_g = resource_radius(g, opts.restarts).value;
  r.c_mg = op_norm(m.matrix()) * r.r_g;
  r.l_max_estimate = induced_one_norm(gen.liouville(), opts.restarts).value;
  if (opts.l_max_certificate) {
    if (*opts.l_max_certificate < r.l_max_estimate * (1.0 - 1e-9)) {
      std::ostringstream os;
      os << "time_feasibility: certificate " << *opts.l_max_certificate << " below the estimate "
         << r.l_max_estimate;
      throw ValidationError(os.str());
    }
    r.l_max = *opts.l_max_certificate;
    r.l_max_certified = true;
  } else {
    r.l_max = r.l_max_estimate;
  }
  const double slope = r.c_mg * r.l_max;
  for (double t : r.time_grid) r.uniform_bound_series.push_back((t - t1) * slope);
  if (target == 0.0) {
    r.min_time = 0.0;
  } else {
    r.min_time = slope > 0.0 ? target / slope : kInf;
  }
  r.feasibility_ceiling = (t2 - t1) * slope;
  r.feasible = target <= r.feasibility_ceiling;
  r.gkls_gamma_bound = 2.0 * r.r_g * op_norm(m.matrix()) * gen.gkls_scale();
  for (int k = 0; k < n; ++k) {
    if (std::abs(r.capacity_series[k] - r.capacity_series[0]) >= target) {
      r.reached_at = r.time_grid[k];
      break;
    }
  }
  return r;
}

}  // namespace qres
