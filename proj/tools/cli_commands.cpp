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

#include "cli_commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace qres::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path.string() + ": cannot write");
  f << content;
}

std::filesystem::path output_dir(const Invocation& inv) {
  std::filesystem::path dir(*inv.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ": cannot create output directory");
  return dir;
}

// CSV goes to <out>/<name>.csv when --out is given, else to stdout.
void emit_table(const Invocation& inv, const std::string& name, const Table& t, std::ostream& out) {
  if (!inv.out_dir) {
    if (inv.plots) throw ConfigError("--plots: requires --out");
    t.write_csv(out);
    return;
  }
  const std::filesystem::path dir = output_dir(inv);
  std::ostringstream csv;
  t.write_csv(csv);
  write_file(dir / (name + ".csv"), csv.str());
  if (inv.plots) {
    std::ostringstream svg;
    t.write_svg(svg, name);
    write_file(dir / (name + ".svg"), svg.str());
  }
  out << "wrote " << (dir / (name + ".csv")).string() << "\n";
}

// Text reports go to stdout and, with --out, to <out>/<name>.txt.
void emit_report(const Invocation& inv, const std::string& name, const std::string& text, std::ostream& out) {
  out << text;
  if (inv.out_dir) write_file(output_dir(inv) / (name + ".txt"), text);
}

// Summary lines go to stdout when the CSV is in a file, else to stderr.
std::ostream& summary_stream(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return inv.out_dir ? out : err;
}

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = n == 1 ? a : a + (b - a) * k / (n - 1);
  return t;
}

const dimer::Params& require_dimer(const RunConfig& cfg, const char* command) {
  if (cfg.model.type != ModelType::dimer)
    throw PreconditionError(std::string(command) + ": needs model.type = \"dimer\"");
  return cfg.model.dimer;
}

bool is_site_dephasing(const RunConfig& cfg) { return cfg.map.kind == "dephasing" && !cfg.map.basis; }

// Closed-form envelope for the dimer at zero detuning, when it applies.
std::optional<dimer::ClosedFormBounds> closed_form_bounds(const RunConfig& cfg, double t1, double t2, double target,
                                                          std::string* why) {
  if (cfg.model.type != ModelType::dimer || !is_site_dephasing(cfg)) {
    if (why) *why = "closed-form bounds need the dimer with site dephasing";
    return std::nullopt;
  }
  const auto coeffs = observable_coeffs(cfg);
  if (!coeffs) {
    if (why) *why = "closed-form bounds need a block-form observable";
    return std::nullopt;
  }
  try {
    return dimer::bounds_closed_form(cfg.model.dimer, *coeffs, t1, t2, target);
  } catch (const PreconditionError& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

std::string verdict(bool feasible) { return feasible ? "feasible" : "infeasible"; }

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      if (const double* x = std::get_if<double>(&row[c])) {
        os << format_number(*x);
      } else {
        os << std::get<std::string>(row[c]);
      }
    }
    os << "\n";
  }
}

void Table::write_svg(std::ostream& os, const std::string& title) const {
  constexpr double w = 640, h = 400, margin = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::vector<std::size_t> ys;
  for (std::size_t c = 1; c < columns.size(); ++c)
    if (!rows.empty() && std::holds_alternative<double>(rows.front()[c])) ys.push_back(c);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& row : rows) {
    const double x = std::get<double>(row[0]);
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    for (std::size_t c : ys) {
      const double y = std::get<double>(row[c]);
      if (!std::isfinite(y)) continue;
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const auto px = [&](double x) { return margin + (w - 2 * margin) * (x - x0) / (x1 - x0); };
  const auto py = [&](double y) { return h - margin - (h - 2 * margin) * (y - y0) / (y1 - y0); };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w - 2 * margin << "\" height=\""
     << h - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"30\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<text x=\"" << margin << "\" y=\"" << h - 20 << "\">" << format_number(x0) << "</text>\n";
  os << "<text x=\"" << w - margin << "\" y=\"" << h - 20 << "\" text-anchor=\"end\">" << format_number(x1)
     << "</text>\n";
  os << "<text x=\"5\" y=\"" << h - margin << "\">" << format_number(y0) << "</text>\n";
  os << "<text x=\"5\" y=\"" << margin + 10 << "\">" << format_number(y1) << "</text>\n";
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const char* colour = palette[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
    for (const auto& row : rows) {
      const double y = std::get<double>(row[ys[i]]);
      if (!std::isfinite(y)) continue;
      os << format_number(px(std::get<double>(row[0]))) << "," << format_number(py(y)) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << w - margin + 5 << "\" y=\"" << margin + 15 * (i + 1) << "\" fill=\"" << colour
       << "\" font-size=\"10\">" << columns[ys[i]] << "</text>\n";
  }
  os << "</svg>\n";
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QRES_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      (void)w;
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int cmd_sweep_theta(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.cfg;
  const dimer::Params base = require_dimer(cfg, "sweep-theta");
  if (!is_site_dephasing(cfg)) throw PreconditionError("sweep-theta: the closed form assumes site dephasing");
  const auto coeffs = observable_coeffs(cfg);
  if (!coeffs) throw PreconditionError("sweep-theta: the closed form needs a block-form observable");
  const ResourceDestroyingMap g = build_map(cfg);
  const HermitianObservable m = build_observable(cfg);
  const int n = cfg.run.theta_points;
  const std::vector<double> thetas = uniform_grid(0.0, std::numbers::pi, n);
  std::vector<std::array<double, 2>> values(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t k) {
    dimer::Params p = base;
    p.theta = thetas[k];
    values[k] = {dimer::capacity_closed_form(p, *coeffs), capacity(dimer::kraus_chain(p), g, m).capacity};
  });
  Table t{{"theta", "capacity_closed_form", "capacity_spectral", "abs_diff"}, {}};
  double worst = 0.0;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double diff = std::abs(values[k][0] - values[k][1]);
    worst = std::max(worst, diff);
    t.rows.push_back({thetas[k], values[k][0], values[k][1], diff});
  }
  emit_table(inv, "sweep_theta", t, out);
  summary_stream(inv, out, err) << "max abs_diff " << format_number(worst) << "\n";
  if (worst >= 1e-10) {
    err << "invariant failure: closed form and spectral capacity differ by " << format_number(worst) << "\n";
    return kInvariantFailure;
  }
  return kOk;
}

int cmd_dynamics(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.cfg;
  const LindbladGenerator gen = build_generator(cfg);
  const ResourceDestroyingMap g = build_map(cfg);
  const HermitianObservable m = build_observable(cfg);
  const double t1 = cfg.run.t_start;
  BoundOptions opts;
  opts.grid_points = cfg.run.grid_points;
  opts.restarts = cfg.run.restarts;
  opts.l_max_certificate = 2.0 * gen.gkls_scale();
  const BoundReport r = time_feasibility(gen, g, m, t1, cfg.run.t_end, cfg.run.target, opts);

  std::string why;
  const bool analytic = closed_form_bounds(cfg, t1, t1, 0.0, &why).has_value();
  if (!analytic) err << "warning: analytic_bound column is nan: " << why << "\n";
  const std::string regime =
      cfg.model.type == ModelType::dimer ? dimer::to_string(dimer::regime_of(cfg.model.dimer)) : "none";

  Table t{{"t", "capacity", "gamma", "variation_integral", "uniform_bound", "analytic_bound", "regime"}, {}};
  int violations = 0;
  for (std::size_t k = 0; k < r.time_grid.size(); ++k) {
    const double tk = r.time_grid[k];
    const double change = std::abs(r.capacity_series[k] - r.capacity_series[0]);
    const double integral = r.variation_integral_series[k];
    const double uniform = r.uniform_bound_series[k];
    const double bound = analytic ? closed_form_bounds(cfg, t1, tk, 0.0, nullptr)->variation_bound : kNan;
    const bool ok = change <= integral + 1e-8 && integral <= uniform + 1e-9 && (!analytic || integral <= bound + 1e-9);
    if (!ok) {
      ++violations;
      err << "invariant failure at t=" << format_number(tk) << ": |dC|=" << format_number(change)
          << " integral=" << format_number(integral) << " uniform=" << format_number(uniform)
          << " analytic=" << format_number(bound) << "\n";
    }
    t.rows.push_back({tk, r.capacity_series[k], r.gamma_series[k], integral, uniform, bound, regime});
  }
  if (violations) return kInvariantFailure;
  emit_table(inv, "dynamics", t, out);
  return kOk;
}

int cmd_bounds(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  const RunConfig& cfg = inv.cfg;
  const LindbladGenerator gen = build_generator(cfg);
  const ResourceDestroyingMap g = build_map(cfg);
  const HermitianObservable m = build_observable(cfg);
  const double t1 = cfg.run.t_start;
  const double t2 = cfg.run.t_end;
  const double target = cfg.run.target;
  BoundOptions opts;
  opts.grid_points = cfg.run.grid_points;
  opts.restarts = cfg.run.restarts;
  opts.l_max_certificate = 2.0 * gen.gkls_scale();
  const BoundReport r = time_feasibility(gen, g, m, t1, t2, target, opts);

  std::string why;
  const auto cf = closed_form_bounds(cfg, t1, t2, target, &why);
  std::ostringstream rep;
  rep << "target " << format_number(target) << "\n";
  rep << "window " << format_number(t1) << " " << format_number(t2) << "\n";
  rep << "resource_radius " << format_number(r.r_g) << "\n";
  rep << "c_mg " << format_number(r.c_mg) << "\n";
  rep << "l_max " << format_number(r.l_max) << (r.l_max_certified ? " certified" : " estimate") << "\n";
  rep << "l_max_estimate " << format_number(r.l_max_estimate) << "\n";
  rep << "uniform_min_time " << format_number(r.min_time) << "\n";
  rep << "uniform_ceiling " << format_number(r.feasibility_ceiling) << "\n";
  rep << "uniform_verdict " << verdict(r.feasible) << "\n";
  rep << "reached_at " << (r.reached_at ? format_number(*r.reached_at) : std::string("never")) << "\n";
  if (cf) {
    rep << "regime " << dimer::to_string(cf->regime) << "\n";
    rep << "envelope " << format_number(cf->envelope) << "\n";
    rep << "decay " << format_number(cf->decay) << "\n";
    rep << "a_u " << format_number(cf->a_u) << "\n";
    rep << "b " << format_number(cf->b) << "\n";
    rep << "closed_form_variation_bound " << format_number(cf->variation_bound) << "\n";
    rep << "ceiling " << format_number(cf->feasibility_ceiling) << "\n";
    rep << "min_time " << (cf->min_time ? format_number(*cf->min_time) : std::string("n/a")) << "\n";
    rep << "verdict " << verdict(cf->feasible) << "\n";
  } else {
    rep << "closed_form n/a: " << why << "\n";
    rep << "verdict " << verdict(r.feasible) << "\n";
  }
  emit_report(inv, "bounds", rep.str(), out);

  Table t{{"delta_tau", "uniform_max_change", "closed_form_max_change", "observed_change"}, {}};
  for (std::size_t k = 0; k < r.time_grid.size(); ++k) {
    const double tk = r.time_grid[k];
    const double closed = cf ? closed_form_bounds(cfg, t1, tk, target, nullptr)->variation_bound : kNan;
    t.rows.push_back(
        {tk - t1, r.uniform_bound_series[k], closed, std::abs(r.capacity_series[k] - r.capacity_series[0])});
  }
  if (inv.out_dir) emit_table(inv, "bounds", t, out);
  return kOk;
}

int cmd_decompose(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.cfg;
  const ResourceDestroyingMap g = build_map(cfg);
  const HermitianObservable m = build_observable(cfg);
  std::ostringstream rep;
  int code = kOk;
  const bool has_channel = cfg.model.type == ModelType::dimer || !cfg.model.kraus.empty();
  const bool has_generator = cfg.model.type == ModelType::dimer || cfg.model.hamiltonian.has_value();

  if (has_channel) {
    const QuantumChannel lambda = build_channel(cfg);
    const SplitChannel s = split_channel(lambda, g);
    const CrossBlocks cb = cross_block_flags(lambda.superop(), g);
    const CapacityEquality ce = capacity_equality_check(lambda.superop(), g, m);
    rep << "channel free_norm " << format_number(s.free.frobenius_norm()) << "\n";
    rep << "channel res_norm " << format_number(s.res.frobenius_norm()) << "\n";
    rep << "channel perp_perp_norm " << format_number(s.perp_perp.frobenius_norm()) << "\n";
    rep << "channel generating_norm " << format_number(cb.generating_norm) << "\n";
    rep << "channel activating_norm " << format_number(cb.activating_norm) << "\n";
    rep << "channel commutator_norm " << format_number(cb.commutator_norm) << "\n";
    rep << "channel non_generating " << cb.non_generating << "\n";
    rep << "channel non_activating " << cb.non_activating << "\n";
    rep << "channel covariant " << cb.covariant << "\n";
    rep << "channel free_is_cptp " << s.free_is_cptp << "\n";
    rep << "channel res_trace_annihilating " << s.res_trace_annihilating << "\n";
    rep << "capacity full " << format_number(ce.full) << " res " << format_number(ce.res) << " res_tilde "
        << format_number(ce.res_tilde) << " agree " << ce.agree << "\n";
    if (!s.res_trace_annihilating || !ce.agree || (g.cptp() && !s.free_is_cptp)) {
      err << "invariant failure: channel split\n";
      code = kInvariantFailure;
    }
  }

  if (has_generator) {
    const LindbladGenerator gen = build_generator(cfg);
    const SplitChannel s = split_generator(gen, g);
    const CrossBlocks cb = cross_block_flags(gen.liouville(), g);
    const CompatibilityReport cr = compatibility_check(gen, g, compatibility_grid(cfg.run.t_start, cfg.run.t_end));
    rep << "generator free_norm " << format_number(s.free.frobenius_norm()) << "\n";
    rep << "generator generating_norm " << format_number(cb.generating_norm) << "\n";
    rep << "generator activating_norm " << format_number(cb.activating_norm) << "\n";
    rep << "generator non_generating " << cb.non_generating << "\n";
    rep << "generator non_activating " << cb.non_activating << "\n";
    rep << "compatibility max_residual " << format_number(cr.max_residual) << "\n";
    rep << "verdict " << (cr.compatible ? "compatible" : "incompatible") << "\n";
    if (cb.non_generating && !cr.compatible) {
      err << "invariant failure: non-generating generator with compatibility residual "
          << format_number(cr.max_residual) << "\n";
      code = kInvariantFailure;
    }
    emit_report(inv, "decompose", rep.str(), out);
    Table t{{"t", "residual", "ode_residual"}, {}};
    for (std::size_t k = 0; k < cr.times.size(); ++k) t.rows.push_back({cr.times[k], cr.residuals[k], cr.ode_residuals[k]});
    if (inv.out_dir) {
      emit_table(inv, "compatibility", t, out);
    } else {
      t.write_csv(out);
    }
  } else {
    emit_report(inv, "decompose", rep.str(), out);
  }
  return code;
}

int cmd_hypothesis(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = inv.cfg;
  const QuantumChannel lambda = build_channel(cfg);
  const ResourceDestroyingMap g = build_map(cfg);
  const HermitianObservable m0 = build_observable(cfg);
  const HermitianObservable m = [&] {
    try {
      return HermitianObservable(m0.matrix(), true);
    } catch (const ValidationError& e) {
      throw PreconditionError(std::string("hypothesis: observable is not a POVM element: ") + e.what());
    }
  }();
  const ImpactResult best = capacity(lambda, g, m);
  const DensityOperator rho = cfg.run.state ? DensityOperator(*cfg.run.state) : best.optimizer;
  const auto& ns = cfg.run.hypothesis_n;
  std::vector<HypothesisReport> reports(ns.size());
  parallel_for(ns.size(), [&](std::size_t k) {
    Sampler sampler(cfg.run.seed + k);
    reports[k] = hypothesis_test(lambda.superop(), g, m, rho, ns[k], cfg.run.trials, sampler);
  });
  Table t{{"n", "hoeffding_bound", "empirical_error", "statistical_slack"}, {}};
  bool ok = true;
  for (const auto& r : reports) {
    t.rows.push_back({static_cast<double>(r.n), r.hoeffding_bound, r.empirical_error, r.statistical_slack});
    ok = ok && r.within_bound();
  }
  emit_table(inv, "hypothesis", t, out);
  if (!reports.empty())
    summary_stream(inv, out, err) << "bias " << format_number(reports.front().bias) << " p_succ "
                                  << format_number(reports.front().p_succ) << "\n";
  if (!ok) {
    err << "invariant failure: empirical error above the Hoeffding bound\n";
    return kInvariantFailure;
  }
  return kOk;
}

int cmd_verify(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  const std::vector<SuiteResult> results = run_verify_suites(inv.cfg, inv.cfg.run.seed, inv.cfg.run.samples);
  std::ostringstream rep;
  int failed = 0;
  for (const auto& r : results) {
    rep << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << format_number(r.worst) << " samples=" << r.samples
        << " seed=" << r.seed;
    if (!r.detail.empty()) rep << " (" << r.detail << ")";
    rep << "\n";
    if (!r.passed) ++failed;
  }
  rep << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size() << " suites passed\n";
  emit_report(inv, "verify", rep.str(), out);
  return failed ? kInvariantFailure : kOk;
}

int cmd_check_config(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  validate_config(inv.cfg);
  out << "config ok: " << inv.cfg.source << " (dim " << model_dim(inv.cfg) << ", map " << inv.cfg.map.kind << ")\n";
  return kOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"sweep-theta", "dynamics", "bounds",      "decompose",
                                              "hypothesis",  "verify",   "check-config"};
  return names;
}

int run_command(const std::string& name, const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    if (name != "verify") validate_config(inv.cfg);
    if (name == "sweep-theta") return cmd_sweep_theta(inv, out, err);
    if (name == "dynamics") return cmd_dynamics(inv, out, err);
    if (name == "bounds") return cmd_bounds(inv, out, err);
    if (name == "decompose") return cmd_decompose(inv, out, err);
    if (name == "hypothesis") return cmd_hypothesis(inv, out, err);
    if (name == "verify") return cmd_verify(inv, out, err);
    if (name == "check-config") return cmd_check_config(inv, out, err);
    err << "unknown command: " << name << "\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kRegimeMismatch;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

}  // namespace qres::cli
