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

#include "cli_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qres::cli {

namespace {

using Json = nlohmann::json;

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& get(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key_path(key) + ": not finite");
    return x;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback, int min_value) {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value || x > 1000000000LL)
      throw ConfigError(key_path(key) + ": must lie in [" + std::to_string(min_value) + ", 1e9]");
    return static_cast<int>(x);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_number_unsigned()) throw ConfigError(key_path(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError(key_path(item.key()) + ": unknown key");
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Complex parse_complex(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(path + ": expected a [real, imag] pair");
  const double re = v[0].get<double>();
  const double im = v[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw ConfigError(path + ": not finite");
  return {re, im};
}

// Row-major list of [real, imag] pairs; the length must be a perfect square.
Matrix parse_matrix(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty list of [real, imag] pairs");
  const auto n = static_cast<Index>(v.size());
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw ConfigError(path + ": entry count " + std::to_string(n) + " is not a perfect square");
  Matrix m(d, d);
  for (Index k = 0; k < n; ++k)
    m(k / d, k % d) = parse_complex(v[static_cast<std::size_t>(k)], path + "[" + std::to_string(k) + "]");
  return m;
}

std::vector<Matrix> parse_matrix_list(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty list of matrices");
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(parse_matrix(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

ModelConfig parse_model(Section s) {
  ModelConfig m;
  const std::string type = s.string("type", "dimer");
  if (type == "dimer") {
    m.type = ModelType::dimer;
    dimer::Params& p = m.dimer;
    p.detuning = s.number("detuning", 0.0);
    p.coupling = s.number("coupling", 0.0);
    p.dephasing_rate = s.number("dephasing_rate", 0.0);
    p.decay_donor = s.number("decay_donor", 0.0);
    p.decay_acceptor = s.number("decay_acceptor", 0.0);
    p.theta = s.number("theta", dimer::mixing_angle(p.detuning, p.coupling));
    m.dt = s.optional_number("dt");
    if (m.dt) {
      if (*m.dt < 0.0) throw ConfigError(s.key_path("dt") + ": must be non-negative");
      const dimer::Params stepped = p.with_step(*m.dt);
      p.eta = s.number("eta", stepped.eta);
      p.p_donor = s.number("p_donor", stepped.p_donor);
      p.p_acceptor = s.number("p_acceptor", stepped.p_acceptor);
      if (!p.consistent_with_step(*m.dt, 1e-9))
        throw ConfigError(s.key_path("eta") + ": eta, p_donor, p_acceptor inconsistent with the rates over dt");
    } else {
      p.eta = s.number("eta", 1.0);
      p.p_donor = s.number("p_donor", 0.0);
      p.p_acceptor = s.number("p_acceptor", 0.0);
    }
  } else if (type == "custom") {
    m.type = ModelType::custom;
    if (s.has("hamiltonian")) m.hamiltonian = parse_matrix(s.get("hamiltonian"), s.key_path("hamiltonian"));
    if (s.has("jumps")) {
      const Json& list = s.get("jumps");
      if (!list.is_array()) throw ConfigError(s.key_path("jumps") + ": expected a list");
      for (std::size_t k = 0; k < list.size(); ++k) {
        Section js(list[k], s.key_path("jumps") + "[" + std::to_string(k) + "]");
        if (!js.has("operator")) throw ConfigError(js.key_path("operator") + ": missing");
        JumpOperator jump{parse_matrix(js.get("operator"), js.key_path("operator")), js.number("rate", 0.0)};
        js.finish();
        m.jumps.push_back(std::move(jump));
      }
    }
    if (s.has("kraus")) m.kraus = parse_matrix_list(s.get("kraus"), s.key_path("kraus"));
    if (!m.hamiltonian && m.kraus.empty())
      throw ConfigError(s.key_path("hamiltonian") + ": a custom model needs a hamiltonian or a kraus list");
  } else {
    throw ConfigError(s.key_path("type") + ": expected \"dimer\" or \"custom\"");
  }
  s.finish();
  return m;
}

MapConfig parse_map(Section s) {
  MapConfig m;
  m.kind = s.string("kind", "dephasing");
  if (m.kind == "dephasing") {
    if (s.has("basis")) m.basis = parse_matrix(s.get("basis"), s.key_path("basis"));
  } else if (m.kind == "twirl") {
    if (!s.has("unitaries")) throw ConfigError(s.key_path("unitaries") + ": required for a twirl");
    m.unitaries = parse_matrix_list(s.get("unitaries"), s.key_path("unitaries"));
  } else if (m.kind == "replacement") {
    if (!s.has("sigma")) throw ConfigError(s.key_path("sigma") + ": required for a replacement map");
    m.sigma = parse_matrix(s.get("sigma"), s.key_path("sigma"));
  } else {
    throw ConfigError(s.key_path("kind") + ": expected dephasing, twirl or replacement");
  }
  s.finish();
  return m;
}

ObservableConfig parse_observable(Section s) {
  ObservableConfig o;
  o.povm = s.boolean("povm", false);
  const bool coeff_keys = s.has("mu_g") || s.has("mu_d") || s.has("mu_a") || s.has("nu");
  if (s.has("matrix")) {
    if (coeff_keys) throw ConfigError(s.key_path("matrix") + ": give either matrix or mu_g/mu_d/mu_a/nu, not both");
    o.matrix = parse_matrix(s.get("matrix"), s.key_path("matrix"));
  } else if (coeff_keys) {
    dimer::ObservableCoeffs c;
    c.mu_g = s.number("mu_g", 0.0);
    c.mu_d = s.number("mu_d", 0.0);
    c.mu_a = s.number("mu_a", 0.0);
    if (s.has("nu")) c.nu = parse_complex(s.get("nu"), s.key_path("nu"));
    o.coeffs = c;
  }
  s.finish();
  return o;
}

RunOptions parse_run(Section s) {
  RunOptions r;
  r.t_start = s.number("t_start", r.t_start);
  r.t_end = s.number("t_end", r.t_end);
  if (r.t_start < 0.0 || r.t_end < r.t_start) throw ConfigError(s.key_path("t_end") + ": need 0 <= t_start <= t_end");
  r.grid_points = s.integer("grid_points", r.grid_points, 2);
  r.seed = s.unsigned_integer("seed", r.seed);
  r.samples = s.integer("samples", r.samples, 1);
  r.target = s.number("target", r.target);
  if (r.target < 0.0) throw ConfigError(s.key_path("target") + ": must be non-negative");
  r.theta_points = s.integer("theta_points", r.theta_points, 2);
  if (s.has("hypothesis_n")) {
    const Json& v = s.get("hypothesis_n");
    if (!v.is_array() || v.empty()) throw ConfigError(s.key_path("hypothesis_n") + ": expected a list of integers");
    r.hypothesis_n.clear();
    for (const Json& x : v) {
      if (!x.is_number_integer() || x.get<long long>() < 1)
        throw ConfigError(s.key_path("hypothesis_n") + ": entries must be positive integers");
      r.hypothesis_n.push_back(x.get<int>());
    }
  }
  r.trials = s.integer("trials", r.trials, 1);
  if (s.has("state")) r.state = parse_matrix(s.get("state"), s.key_path("state"));
  r.restarts = s.integer("restarts", r.restarts, 1);
  r.inject_broken_kraus = s.boolean("inject_broken_kraus", r.inject_broken_kraus);
  s.finish();
  return r;
}

std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename F>
auto as_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(source + ": " + line_of(text, e.byte) + ": syntax error");
  }
  Section root(j, "");
  RunConfig cfg;
  cfg.source = source;
  if (root.has("model")) cfg.model = parse_model(Section(root.get("model"), "model"));
  if (root.has("map")) cfg.map = parse_map(Section(root.get("map"), "map"));
  if (root.has("observable")) cfg.observable = parse_observable(Section(root.get("observable"), "observable"));
  if (root.has("run")) cfg.run = parse_run(Section(root.get("run"), "run"));
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

Index model_dim(const RunConfig& cfg) {
  if (cfg.model.type == ModelType::dimer) return 3;
  if (cfg.model.hamiltonian) return cfg.model.hamiltonian->rows();
  return cfg.model.kraus.front().rows();
}

LindbladGenerator build_generator(const RunConfig& cfg) {
  if (cfg.model.type == ModelType::dimer)
    return as_config_error("model", [&] { return dimer::generator(cfg.model.dimer); });
  if (!cfg.model.hamiltonian) throw ConfigError("model.hamiltonian: required for time evolution");
  return as_config_error("model", [&] {
    return LindbladGenerator::build_gkls(HermitianObservable(*cfg.model.hamiltonian), cfg.model.jumps);
  });
}

QuantumChannel build_channel(const RunConfig& cfg) {
  if (cfg.model.type == ModelType::dimer)
    return as_config_error("model", [&] { return dimer::kraus_chain(cfg.model.dimer); });
  if (cfg.model.kraus.empty()) throw ConfigError("model.kraus: required for channel commands");
  return as_config_error("model.kraus", [&] { return QuantumChannel::from_kraus(cfg.model.kraus); });
}

ResourceDestroyingMap build_map(const RunConfig& cfg) {
  const Index d = model_dim(cfg);
  return as_config_error("map", [&] {
    if (cfg.map.kind == "twirl") return make_twirl(cfg.map.unitaries);
    if (cfg.map.kind == "replacement") return make_replacement(DensityOperator(*cfg.map.sigma));
    if (cfg.map.basis) return make_dephasing(*cfg.map.basis);
    return make_dephasing(d);
  });
}

HermitianObservable build_observable(const RunConfig& cfg) {
  const ObservableConfig& o = cfg.observable;
  return as_config_error("observable", [&] {
    if (o.matrix) return HermitianObservable(*o.matrix, o.povm);
    if (o.coeffs) return o.coeffs->matrix(o.povm);
    if (cfg.model.type == ModelType::dimer) return dimer::ObservableCoeffs::acceptor().matrix(o.povm);
    throw ConfigError("observable: required for a custom model");
  });
}

std::optional<dimer::ObservableCoeffs> observable_coeffs(const RunConfig& cfg) {
  if (cfg.observable.matrix) return std::nullopt;
  if (cfg.observable.coeffs) return cfg.observable.coeffs;
  if (cfg.model.type == ModelType::dimer) return dimer::ObservableCoeffs::acceptor();
  return std::nullopt;
}

void validate_config(const RunConfig& cfg) {
  const Index d = model_dim(cfg);
  if (cfg.model.type == ModelType::dimer) {
    as_config_error("model", [&] {
      cfg.model.dimer.validate();
      return 0;
    });
  }
  if (cfg.model.hamiltonian || cfg.model.type == ModelType::dimer) build_generator(cfg);
  if (cfg.model.type == ModelType::dimer || !cfg.model.kraus.empty()) build_channel(cfg);
  for (std::size_t k = 0; k < cfg.model.jumps.size(); ++k)
    if (cfg.model.jumps[k].op.rows() != d)
      throw ConfigError("model.jumps[" + std::to_string(k) + "].operator: dimension mismatch");
  const ResourceDestroyingMap g = build_map(cfg);
  if (g.dim() != d) throw ConfigError("map: dimension " + std::to_string(g.dim()) + " does not match the model");
  const HermitianObservable m = build_observable(cfg);
  if (m.dim() != d) throw ConfigError("observable: dimension does not match the model");
  if (cfg.run.state) {
    const DensityOperator rho = as_config_error("run.state", [&] { return DensityOperator(*cfg.run.state); });
    if (rho.dim() != d) throw ConfigError("run.state: dimension does not match the model");
  }
}

}  // namespace qres::cli
