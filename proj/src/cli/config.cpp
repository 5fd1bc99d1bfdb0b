// Copyright 2026 The catsim Authors
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


#include "catsim/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "catsim/error.hpp"
#include "catsim/rng.hpp"

namespace catsim::cli {

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

double number(const json& v, const std::string& key) {
  if (!v.is_number()) config_error("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error("'" + key + "' must be finite");
  return x;
}

bool has(const json& obj, const char* key) { return obj.contains(key); }

// Value -> relation pairs. Setting either member in the user block drops
// both from the defaults.
const std::vector<std::vector<const char*>> kGroups = {
    {"g", "g_col"},
    {"J", "J_over_gcol"},
    {"Delta", "Delta_over_gcol"},
    {"kappa_p", "kappa_p_over_chi"},
    {"kappa_s", "kappa_s_over_kappa_p"},
    {"Omega", "alpha_sq"},
    {"delta_p", "compensate"},
};

}  // namespace

json merge(json base, const json& overrides) {
  if (!base.is_object() || !overrides.is_object()) return overrides;
  for (auto it = overrides.begin(); it != overrides.end(); ++it)
    base[it.key()] = base.contains(it.key()) ? merge(base[it.key()], it.value()) : it.value();
  return base;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) config_error("'" + where + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) config_error("unknown key '" + it.key() + "' in " + where);
  }
}

double frequency(const json& v, const std::string& key) {
  if (v.is_number()) return number(v, key);
  if (!v.is_object()) config_error("'" + key + "' must be a number or {value, unit}");
  reject_unknown(v, {"value", "unit"}, key);
  if (!has(v, "value") || !has(v, "unit")) config_error("'" + key + "' needs both value and unit");
  const double x = number(v["value"], key + ".value");
  if (!v["unit"].is_string()) config_error("'" + key + ".unit' must be a string");
  const std::string u = v["unit"].get<std::string>();
  static const std::map<std::string, double> scale = {
      {"rad/s", 1.0},
      {"mHz", 2e-3 * M_PI},
      {"Hz", 2.0 * M_PI},
      {"kHz", 2e3 * M_PI},
      {"MHz", 2e6 * M_PI},
      {"GHz", 2e9 * M_PI},
  };
  auto it = scale.find(u);
  if (it == scale.end()) config_error("unknown unit '" + u + "' for '" + key + "'");
  return x * it->second;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  reject_unknown(doc, {"experiment", "output_dir", "params", "dephasing", "thermal", "integrator",
                       "seeds", "options"},
                 "config");
  ExperimentConfig c;
  c.raw = doc;
  if (!has(doc, "experiment") || !doc["experiment"].is_string())
    config_error("'experiment' (string) is required");
  c.experiment = doc["experiment"].get<std::string>();
  if (!has(doc, "output_dir") || !doc["output_dir"].is_string() ||
      doc["output_dir"].get<std::string>().empty())
    config_error("'output_dir' (non-empty string) is required");
  c.output_dir = doc["output_dir"].get<std::string>();
  for (auto [key, dst] : {std::pair<const char*, json*>{"params", &c.params},
                          {"dephasing", &c.dephasing},
                          {"thermal", &c.thermal},
                          {"integrator", &c.integrator},
                          {"options", &c.options}}) {
    if (!has(doc, key)) continue;
    if (!doc[key].is_object()) config_error(std::string("'") + key + "' must be an object");
    *dst = doc[key];
  }
  reject_unknown(c.params,
                 {"N", "g", "g_col", "J", "J_over_gcol", "Delta", "Delta_over_gcol", "Delta_prime",
                  "delta_p", "delta_s", "delta_q", "Omega", "alpha_sq", "kappa_p",
                  "kappa_p_over_chi", "kappa_s", "kappa_s_over_kappa_p", "compensate"},
                 "params");
  reject_unknown(c.dephasing, {"gamma_col", "gamma_loc", "delta_inh"}, "dephasing");
  reject_unknown(c.thermal, {"gamma_relax", "omega_q", "T"}, "thermal");
  reject_unknown(c.integrator, {"method", "rel_tol", "abs_tol", "max_step", "fixed_step"},
                 "integrator");
  for (const auto& g : kGroups)
    if (has(c.params, g[0]) && has(c.params, g[1]))
      config_error(std::string("params: give either '") + g[0] + "' or '" + g[1] + "', not both");
  if (has(doc, "seeds")) {
    const json& s = doc["seeds"];
    const json* m = &s;
    if (s.is_object()) {
      reject_unknown(s, {"master"}, "seeds");
      if (!has(s, "master")) config_error("'seeds' object needs 'master'");
      m = &s["master"];
    }
    if (!m->is_number_unsigned() && !(m->is_number_integer() && m->get<std::int64_t>() >= 0))
      config_error("seed must be a non-negative integer");
    c.master_seed = m->get<std::uint64_t>();
  }
  // fail early on malformed blocks
  resolve_integrator(c.integrator);
  resolve_dephasing(c.dephasing, 0);
  resolve_thermal(c.thermal, json::object());
  return c;
}

ExperimentConfig load_config(const std::string& path, std::string* raw_text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (raw_text) *raw_text = text;
  return parse_config(doc);
}

json ResolvedParams::to_json() const {
  return {{"N", p.N},
          {"g", p.g},
          {"g_col", p.g_col()},
          {"J", p.J},
          {"Omega", p.Omega},
          {"delta_p", p.delta_p},
          {"delta_s", p.delta_s},
          {"delta_q", p.delta_q},
          {"Delta", p.Delta},
          {"Delta_prime", p.Delta_prime},
          {"kappa_p", p.kappa_p},
          {"kappa_s", p.kappa_s},
          {"compensated", compensated},
          {"chi", rates.chi},
          {"kappa_2at", rates.kappa_2at},
          {"chi_2at", rates.chi_2at},
          {"kappa_1at", rates.kappa_1at},
          {"alpha_sq", alpha_sq}};
}

ResolvedParams resolve_params(const json& params, const json& defaults) {
  json d = defaults;
  for (const auto& g : kGroups)
    if (has(params, g[0]) || has(params, g[1]))
      for (const char* k : g) d.erase(k);
  const json m = merge(d, params);

  ResolvedParams out;
  SystemParams& p = out.p;
  int N = 1;
  if (has(m, "N")) {
    if (!m["N"].is_number_integer() || m["N"].get<int>() < 1)
      config_error("'N' must be a positive integer");
    N = m["N"].get<int>();
  }
  double gc = 1.0;
  if (has(m, "g_col")) gc = frequency(m["g_col"], "g_col");
  if (has(m, "g")) gc = std::sqrt(double(N)) * frequency(m["g"], "g");
  if (!(gc > 0.0)) config_error("collective coupling must be positive");
  double J = 0.0;
  if (has(m, "J")) J = frequency(m["J"], "J");
  if (has(m, "J_over_gcol")) J = number(m["J_over_gcol"], "J_over_gcol") * gc;
  double Delta = 0.0;
  if (has(m, "Delta")) Delta = frequency(m["Delta"], "Delta");
  if (has(m, "Delta_over_gcol")) Delta = number(m["Delta_over_gcol"], "Delta_over_gcol") * gc;
  if (Delta == 0.0) config_error("Delta (or Delta_over_gcol) must be nonzero");

  p = SystemParams::resonant(N, gc, J, Delta);
  if (has(m, "delta_q")) p.delta_q = frequency(m["delta_q"], "delta_q");
  if (has(m, "delta_s")) p.delta_s = frequency(m["delta_s"], "delta_s");
  const double chi = gc * gc * J / (Delta * Delta);
  if (has(m, "kappa_p")) p.kappa_p = frequency(m["kappa_p"], "kappa_p");
  if (has(m, "kappa_p_over_chi")) p.kappa_p = number(m["kappa_p_over_chi"], "kappa_p_over_chi") * chi;
  if (has(m, "kappa_s")) p.kappa_s = frequency(m["kappa_s"], "kappa_s");
  if (has(m, "kappa_s_over_kappa_p"))
    p.kappa_s = number(m["kappa_s_over_kappa_p"], "kappa_s_over_kappa_p") * p.kappa_p;
  if (has(m, "Omega")) p.Omega = frequency(m["Omega"], "Omega");
  if (has(m, "alpha_sq")) {
    const double a2 = number(m["alpha_sq"], "alpha_sq");
    if (a2 < 0.0) config_error("'alpha_sq' must be non-negative");
    p.Omega = a2 * chi;
  }
  bool compensate = false;
  if (has(m, "compensate")) {
    if (!m["compensate"].is_boolean()) config_error("'compensate' must be a boolean");
    compensate = m["compensate"].get<bool>();
  }
  if (has(m, "delta_p")) p.delta_p = frequency(m["delta_p"], "delta_p");
  p.Delta_prime = 2.0 * p.delta_s - p.delta_p;
  if (compensate) {
    p = compensate_second_order(p);
    out.compensated = true;
  }
  if (has(m, "Delta_prime")) p.Delta_prime = frequency(m["Delta_prime"], "Delta_prime");
  try {
    p.validate();
  } catch (const Error& e) {
    config_error(std::string("params: ") + e.what());
  }

  if (p.kappa_p > 0.0) {
    out.rates = derive_rates(p);
  } else {
    out.rates.g_col = gc;
    out.rates.chi = chi;
    out.rates.kappa_1at = (gc / Delta) * (gc / Delta) * p.kappa_s;
  }
  out.alpha_sq = chi > 0.0 ? p.Omega / chi : 0.0;
  return out;
}

DephasingParams resolve_dephasing(const json& block, std::uint64_t seed) {
  DephasingParams d;
  if (has(block, "gamma_col")) d.gamma_col = frequency(block["gamma_col"], "gamma_col");
  if (has(block, "gamma_loc")) d.gamma_loc = frequency(block["gamma_loc"], "gamma_loc");
  if (has(block, "delta_inh")) d.delta_inh = frequency(block["delta_inh"], "delta_inh");
  d.seed = seed;
  if (d.gamma_col < 0.0 || d.gamma_loc < 0.0 || d.delta_inh < 0.0)
    config_error("dephasing rates must be non-negative");
  return d;
}

ThermalParams resolve_thermal(const json& block, const json& defaults) {
  const json m = merge(defaults, block);
  ThermalParams t;
  if (has(m, "gamma_relax")) t.gamma_relax = frequency(m["gamma_relax"], "gamma_relax");
  if (has(m, "omega_q")) t.omega_q = frequency(m["omega_q"], "omega_q");
  if (has(m, "T")) t.T = number(m["T"], "T");
  if (t.gamma_relax < 0.0 || t.omega_q < 0.0 || t.T < 0.0)
    config_error("thermal parameters must be non-negative");
  return t;
}

IntegratorConfig resolve_integrator(const json& block) {
  IntegratorConfig c;
  if (has(block, "method")) {
    if (!block["method"].is_string()) config_error("integrator.method must be a string");
    const std::string m = block["method"].get<std::string>();
    if (m == "rk45")
      c.method = Method::AdaptiveRK45;
    else if (m == "rk4")
      c.method = Method::FixedRK4;
    else
      config_error("integrator.method must be 'rk45' or 'rk4'");
  }
  if (has(block, "rel_tol")) c.rel_tol = number(block["rel_tol"], "integrator.rel_tol");
  if (has(block, "abs_tol")) c.abs_tol = number(block["abs_tol"], "integrator.abs_tol");
  if (has(block, "max_step")) c.max_step = number(block["max_step"], "integrator.max_step");
  if (has(block, "fixed_step")) c.fixed_step = number(block["fixed_step"], "integrator.fixed_step");
  if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0) || !(c.max_step > 0.0))
    config_error("integrator tolerances and max_step must be positive");
  if (c.method == Method::FixedRK4 && !(c.fixed_step > 0.0))
    config_error("integrator.method 'rk4' needs a positive fixed_step");
  return c;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& purpose) {
  // FNV-1a of the purpose, mixed with the master seed
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : purpose) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ splitmix64(h));
}

std::uint64_t SeedMap::stream(const std::string& purpose) {
  auto it = streams.find(purpose);
  if (it != streams.end()) return it->second;
  const std::uint64_t s = derive_seed(master, purpose);
  streams.emplace(purpose, s);
  return s;
}

json SeedMap::to_json() const {
  json s = json::object();
  for (const auto& [k, v] : streams) s[k] = v;
  return {{"master", master}, {"master_drawn", drawn}, {"streams", s}};
}

SeedMap seed_policy(const ExperimentConfig& cfg) {
  SeedMap m;
  if (cfg.master_seed) {
    m.master = *cfg.master_seed;
  } else {
    std::random_device rd;
    m.master = (std::uint64_t(rd()) << 32) ^ rd();
    m.drawn = true;
  }
  return m;
}

}  // namespace catsim::cli
