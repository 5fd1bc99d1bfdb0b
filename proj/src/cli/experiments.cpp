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


#include "catsim/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "catsim/analysis.hpp"
#include "catsim/catstates.hpp"
#include "catsim/diagnostics.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/error.hpp"
#include "catsim/io.hpp"
#include "catsim/lifetime.hpp"

namespace catsim::cli {

std::string RunContext::file(const std::string& name) {
  files.push_back(name);
  return (std::filesystem::path(dir) / name).string();
}

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

const json& opts(const RunContext& c) { return c.cfg.options; }

double opt_num(const RunContext& c, const char* key, double def, bool positive = false) {
  if (!opts(c).contains(key)) return def;
  const json& v = opts(c)[key];
  if (!v.is_number() || !std::isfinite(v.get<double>()))
    config_error(std::string("options.") + key + " must be a finite number");
  const double x = v.get<double>();
  if (positive && !(x > 0.0)) config_error(std::string("options.") + key + " must be positive");
  return x;
}

int opt_int(const RunContext& c, const char* key, int def, int min_value) {
  if (!opts(c).contains(key)) return def;
  const json& v = opts(c)[key];
  if (!v.is_number_integer() || v.get<long long>() < min_value)
    config_error(std::string("options.") + key + " must be an integer >= " +
                 std::to_string(min_value));
  return v.get<int>();
}

bool opt_bool(const RunContext& c, const char* key, bool def) {
  if (!opts(c).contains(key)) return def;
  if (!opts(c)[key].is_boolean()) config_error(std::string("options.") + key + " must be a boolean");
  return opts(c)[key].get<bool>();
}

std::vector<double> opt_list(const RunContext& c, const char* key, std::vector<double> def,
                             bool positive = false) {
  if (!opts(c).contains(key)) return def;
  const json& v = opts(c)[key];
  if (!v.is_array() || v.empty())
    config_error(std::string("options.") + key + " must be a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) config_error(std::string("options.") + key + " must hold numbers");
    const double d = x.get<double>();
    if (!std::isfinite(d) || (positive && !(d > 0.0)))
      config_error(std::string("options.") + key + " entries must be " +
                   (positive ? "positive" : "finite"));
    out.push_back(d);
  }
  return out;
}

std::string tag(double x) {
  std::string s = format_double(x);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

ResolvedParams params(RunContext& c, const json& defaults) {
  ResolvedParams rp = resolve_params(c.cfg.params, defaults);
  c.resolved["params"] = rp.to_json();
  return rp;
}

IntegratorConfig integrator(RunContext& c, std::vector<double> times) {
  IntegratorConfig ic = resolve_integrator(c.cfg.integrator);
  ic.store_times = std::move(times);
  c.resolved["integrator"] = {{"method", ic.method == Method::FixedRK4 ? "rk4" : "rk45"},
                              {"rel_tol", ic.rel_tol},
                              {"abs_tol", ic.abs_tol},
                              {"max_step", finite_or_null(ic.max_step)},
                              {"fixed_step", ic.fixed_step}};
  return ic;
}

void record_evolution(RunContext& c, const std::string& key, const EvolutionRecord& rec) {
  c.report["diagnostics"][key] = {{"max_trace_drift", rec.max_trace_drift},
                                  {"final_population_leak",
                                   rec.population_leak.empty() ? 0.0 : rec.population_leak.back()}};
}

// Ensemble ket placed next to empty cavity modes.
Ket with_vacuum_modes(const SpaceDescriptor& space, std::size_t slot, const Ket& ens) {
  DenseVector v = DenseVector::Zero(space.total_dim());
  std::vector<Index> digits(space.size(), 0);
  for (Index n = 0; n < ens.dim(); ++n) {
    digits[slot] = n;
    v[space.compose(digits)] = ens[n];
  }
  return Ket(space, v);
}

json base_defaults() {
  return {{"N", 100},
          {"g_col", 1.0},
          {"J_over_gcol", 3.0},
          {"Delta_over_gcol", 20.0},
          {"kappa_p_over_chi", 5.0},
          {"kappa_s_over_kappa_p", 0.3},
          {"alpha_sq", 1.0},
          {"compensate", true}};
}

// ---- fig1bc / figS2 ----

json jump_defaults() {
  json d = base_defaults();
  d["kappa_p_over_chi"] = 0.2;
  d.erase("kappa_s_over_kappa_p");
  d["kappa_s"] = 0.0;
  d.erase("alpha_sq");
  d["Omega"] = 0.0;
  return d;
}

void run_jumps(RunContext& c, std::vector<double> initials_default) {
  const ResolvedParams rp = params(c, jump_defaults());
  const std::vector<double> initials = opt_list(c, "initial_excitations", initials_default);
  const int pump = opt_int(c, "pump_nmax", 3, 1);
  const int signal = opt_int(c, "signal_nmax", 2, 1);
  const int n_traj = opt_int(c, "trajectories", 1, 1);
  const double t_end = opt_num(c, "t_end_gcol", 3000.0, true);
  const int points = opt_int(c, "points", 3001, 2);
  int nmax0 = 0;
  for (double n : initials) {
    if (n < 0 || n != std::floor(n) || n > rp.p.N)
      config_error("options.initial_excitations must be integers in [0, N]");
    nmax0 = std::max(nmax0, int(n));
  }
  const int cut = opt_int(c, "dicke_cut", rp.p.Omega == 0.0 ? std::max(nmax0, 1) : -1, -1);
  if (cut >= 0 && cut < nmax0) config_error("options.dicke_cut is below the initial excitation");
  const double gc = rp.rates.g_col;
  IntegratorConfig ic = integrator(c, IntegratorConfig::linspace(0.0, t_end / gc, points));
  if (c.dry_run) return;

  const ModelSpec model = build_full_model(rp.p, {pump, signal, cut});
  const SpaceDescriptor& sp = model.space;
  const Index np = sp.factor(0).dim(), nq = sp.factor(2).dim();
  // populations of |m_p 0>|n>
  std::vector<std::pair<Index, std::string>> cols;
  for (Index m = 0; m < np; ++m)
    for (Index n = 0; n < nq; ++n)
      if (2 * m + n <= nmax0) cols.emplace_back(sp.compose({m, 0, n}), "p_" + std::to_string(m) + "0_" + std::to_string(n));
  const LinOp n_p = embed(fock_number(pump), sp, 0);
  const LinOp n_s = embed(fock_number(signal), sp, 1);

  CsvWriter jumps_csv(c.file("jumps.csv"), {"initial", "trajectory", "t_gcol", "channel"});
  json summary = json::array();
  for (double n0d : initials) {
    const int n0 = int(n0d);
    const Ket psi0 = Ket::basis(sp, {0, 0, Index(n0)});
    for (int k = 0; k < n_traj; ++k) {
      const std::string name = "n" + std::to_string(n0) + "_traj" + std::to_string(k);
      const std::uint64_t seed = c.seeds.stream("trajectory/" + name);
      const TrajectoryRecord rec = evolve_trajectory(model, psi0, ic, seed);
      std::vector<std::string> header = {"t_gcol"};
      for (const auto& col : cols) header.push_back(col.second);
      header.insert(header.end(), {"n_p", "n_s"});
      CsvWriter w(c.file("trajectory_" + name + ".csv"), header,
                  {"full model, initial |00>|" + std::to_string(n0) + ">, seed " +
                   std::to_string(seed)});
      double max_exchange = 0.0;
      for (std::size_t i = 0; i < rec.times.size(); ++i) {
        const Ket& psi = rec.kets[i];
        std::vector<double> row = {rec.times[i] * gc};
        for (const auto& col : cols) row.push_back(std::norm(psi[col.first]));
        row.push_back(psi.expectation(n_p).real());
        row.push_back(psi.expectation(n_s).real());
        if (n0 >= 2) max_exchange = std::max(max_exchange, std::norm(psi[sp.compose({1, 0, Index(n0 - 2)})]));
        w.row(row);
      }
      w.close();
      json jt = json::array();
      for (const auto& j : rec.jumps) {
        jumps_csv.row_text({std::to_string(n0), std::to_string(k), format_double(j.time * gc),
                            model.dissipators[j.channel].label});
        jt.push_back(j.time * gc);
      }
      const Ket& last = rec.kets.back();
      const int n_left = n0 - 2 * int(rec.jumps.size());
      json s = {{"initial", n0}, {"trajectory", k}, {"seed", seed}, {"jumps", rec.jumps.size()},
                {"jump_times_gcol", jt}, {"max_exchange_population", max_exchange}};
      if (n_left >= 0) s["final_overlap_00_" + std::to_string(n_left)] = std::norm(last[sp.compose({0, 0, Index(n_left)})]);
      summary.push_back(s);
    }
  }
  jumps_csv.close();
  c.report["trajectories"] = summary;
}

// ---- fig1d / fig2a / fig2b: three preparations ----

struct Preparation {
  std::string name;
  Ket initial;
  DensityMatrix target_rho;  // used when target is mixed
  Ket target;
  bool mixed = false;
};

double prep_error(const Preparation& prep, const DensityMatrix& rho) {
  return prep.mixed ? preparation_error(rho, prep.target_rho) : preparation_error(rho, prep.target, false);
}

void run_fig1d(RunContext& c) {
  json d = base_defaults();
  if (!c.full && !c.cfg.params.contains("N")) d["N"] = 20;
  const ResolvedParams rp = params(c, d);
  const int pump = opt_int(c, "pump_nmax", 4, 1);
  const int signal = opt_int(c, "signal_nmax", 2, 1);
  const int cut_opt = opt_int(c, "dicke_cut", -1, -1);
  const double t_end = opt_num(c, "t_end_gcol", 3000.0, true);
  const int points = opt_int(c, "points", 301, 2);
  const double alpha0 = opt_num(c, "alpha0", 1.0);
  const double gc = rp.rates.g_col;
  IntegratorConfig ic = integrator(c, IntegratorConfig::linspace(0.0, t_end / gc, points));
  c.report["model"] = c.full ? "full" : "time_averaged";
  if (c.full)
    warn("fig1d --full integrates the full three-factor model; expect hours of runtime");
  else if (rp.p.N != 100)
    c.report["desk_scale_note"] = "N reduced from 100; pass --full for the full model";
  if (c.dry_run) return;

  const int cut = cut_opt < 0 ? default_dicke_cutoff(rp.p.N, rp.alpha_sq) : cut_opt;
  const ModelSpec model = c.full ? build_full_model(rp.p, {pump, signal, cut})
                                 : build_time_averaged_model(rp.p, {pump, signal, cut},
                                                             rp.p.kappa_s > 0.0);
  const std::size_t slot = c.full ? 2 : 1;
  const int N = rp.p.N;
  const DickeRep rep{cut};
  const cplx a = rp.rates.alpha;
  double theta, phi;
  spin_angles(N, alpha0, theta, phi);
  const Ket dicke0 = Ket::basis(SpaceDescriptor({Factor::dicke(N, cut)}), 0);
  const Ket dicke1 = Ket::basis(SpaceDescriptor({Factor::dicke(N, cut)}), 1);
  std::vector<Preparation> preps = {
      {"cplus", with_vacuum_modes(model.space, slot, dicke0), {}, cat_state({a, Parity::Even, rep, N})},
      {"cminus", with_vacuum_modes(model.space, slot, dicke1), {}, cat_state({a, Parity::Odd, rep, N})},
      {"rho_ss", with_vacuum_modes(model.space, slot, spin_coherent(N, theta, phi, cut)),
       manifold_state(a, alpha0, rep, N), {}, true}};

  std::vector<std::vector<double>> eta;
  for (const auto& prep : preps) {
    MasterOptions mo;
    mo.store_states = false;
    mo.functionals = {{"eta", [&](const DensityMatrix& rho) {
                         return prep_error(prep, partial_trace(rho, slot));
                       }}};
    const EvolutionRecord rec = evolve_master(model, DensityMatrix::from_ket(prep.initial), ic, mo);
    record_evolution(c, prep.name, rec);
    eta.push_back(rec.trace("eta"));
    c.report["final_eta"][prep.name] = eta.back().back();
  }
  CsvWriter w(c.file("fig1d_eta.csv"), {"t_gcol", "eta_cplus", "eta_cminus", "eta_rho_ss"},
              {std::string(c.full ? "full" : "time-averaged") + " model, N=" + std::to_string(N)});
  for (std::size_t i = 0; i < ic.store_times.size(); ++i)
    w.row({ic.store_times[i] * gc, eta[0][i], eta[1][i], eta[2][i]});
  w.close();
}

std::vector<Preparation> bosonic_preps(cplx a, double alpha0, int n_max) {
  const BosonicRep rep{n_max};
  const SpaceDescriptor sp({Factor::fock(n_max)});
  return {{"cplus", Ket::basis(sp, 0), {}, cat_state({a, Parity::Even, rep})},
          {"cminus", Ket::basis(sp, 1), {}, cat_state({a, Parity::Odd, rep})},
          {"rho_ss", coherent_state(alpha0, n_max), manifold_state(a, alpha0, rep), {}, true}};
}

ModelSpec bosonic_model(const ResolvedParams& rp, double alpha_sq, int n_max, bool kappa_1at) {
  const RateSet r = effective_rates(rp.rates.kappa_2at, alpha_sq, kappa_1at ? rp.rates.kappa_1at : 0.0);
  return build_effective_model(r, 1, BosonicRep{n_max}, kappa_1at && r.kappa_1at > 0.0);
}

void run_fig2a(RunContext& c) {
  const ResolvedParams rp = params(c, base_defaults());
  const std::vector<double> sizes = opt_list(c, "alpha_sq_list", {2.0, 4.0, 6.0}, true);
  const int n_max = opt_int(c, "n_max", 40, 2);
  const double t_end = opt_num(c, "t_end_gcol", 600.0, true);
  const int points = opt_int(c, "points", 301, 2);
  const double alpha0 = opt_num(c, "alpha0", 1.0);
  const bool k1 = opt_bool(c, "include_kappa_1at", true);
  const double gc = rp.rates.g_col;
  IntegratorConfig ic = integrator(c, IntegratorConfig::linspace(0.0, t_end / gc, points));
  if (c.dry_run) return;

  for (double a2 : sizes) {
    const ModelSpec model = bosonic_model(rp, a2, n_max, k1);
    const cplx a(0.0, std::sqrt(a2));
    std::vector<std::vector<double>> eta;
    for (const auto& prep : bosonic_preps(a, alpha0, n_max)) {
      MasterOptions mo;
      mo.store_states = false;
      mo.functionals = {{"eta", [&](const DensityMatrix& rho) { return prep_error(prep, rho); }}};
      const EvolutionRecord rec = evolve_master(model, DensityMatrix::from_ket(prep.initial), ic, mo);
      record_evolution(c, "alpha_sq_" + tag(a2) + "/" + prep.name, rec);
      eta.push_back(rec.trace("eta"));
      c.report["final_eta"][format_double(a2)][prep.name] = eta.back().back();
    }
    CsvWriter w(c.file("fig2a_alpha_sq_" + tag(a2) + ".csv"),
                {"t_gcol", "eta_cplus", "eta_cminus", "eta_rho_ss"},
                {"bosonic effective model, |alpha|^2=" + format_double(a2)});
    for (std::size_t i = 0; i < ic.store_times.size(); ++i)
      w.row({ic.store_times[i] * gc, eta[0][i], eta[1][i], eta[2][i]});
    w.close();
  }
}

void run_fig2b(RunContext& c) {
  json d = base_defaults();
  d["alpha_sq"] = 4.0;
  const ResolvedParams rp = params(c, d);
  const std::vector<double> times = opt_list(c, "times_gcol", {0.0, 30.0, 60.0, 150.0, 600.0});
  const int n_max = opt_int(c, "n_max", 40, 2);
  const int grid_points = opt_int(c, "grid_points", 81, 2);
  const double alpha0 = opt_num(c, "alpha0", 1.0);
  const bool k1 = opt_bool(c, "include_kappa_1at", true);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i && times[i] <= times[i - 1]))
      config_error("options.times_gcol must be non-negative and increasing");
  const double gc = rp.rates.g_col;
  std::vector<double> t;
  for (double x : times) t.push_back(x / gc);
  IntegratorConfig ic = integrator(c, t);
  if (c.dry_run) return;

  const ModelSpec model = bosonic_model(rp, rp.alpha_sq, n_max, k1);
  WignerGridSpec grid = default_wigner_grid(std::sqrt(rp.alpha_sq));
  grid.points = grid_points;
  for (const auto& prep : bosonic_preps(rp.rates.alpha, alpha0, n_max)) {
    const EvolutionRecord rec = evolve_master(model, DensityMatrix::from_ket(prep.initial), ic);
    record_evolution(c, prep.name, rec);
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      const WignerGrid w = wigner(rec.states[i], grid);
      const std::string stem = "wigner_" + prep.name + "_t" + std::to_string(i + 1);
      write_wigner(w, c.file(stem + ".csv"), c.file(stem + ".json"), prep.name, times[i]);
      c.report["origin"][prep.name].push_back(
          {{"t_gcol", times[i]}, {"W0", w.at_origin()}, {"integral", w.integral()},
           {"eta", prep_error(prep, rec.states[i])}});
    }
  }
}

// ---- fig3a: dephasing on the product space ----

void run_fig3a(RunContext& c) {
  json d = base_defaults();
  d["N"] = 10;
  d["alpha_sq"] = 2.0;
  const ResolvedParams rp = params(c, d);
  const std::vector<double> ratios = opt_list(c, "ratios", {1.0, 2.0, 5.0, 10.0}, true);
  const double t_end = opt_num(c, "t_end_kappa_2at", 40.0, true);
  const int points = opt_int(c, "points", 41, 2);
  const bool k1 = opt_bool(c, "include_kappa_1at", false);
  const double k2 = rp.rates.kappa_2at;
  if (!(k2 > 0.0)) config_error("fig3a needs kappa_p > 0");
  if (rp.p.N > 12) config_error("fig3a uses the 2^N product space; N must be <= 12");
  IntegratorConfig ic = integrator(c, IntegratorConfig::linspace(0.0, t_end / k2, points));
  const std::uint64_t seed = c.seeds.stream("delta_j");
  std::vector<std::pair<std::string, DephasingParams>> runs;
  for (double r : ratios) {
    const double g = k2 / r;
    runs.push_back({"ratio_" + format_double(r), {g, g, g, seed}});
  }
  const DephasingParams extra = resolve_dephasing(c.cfg.dephasing, seed);
  if (extra.gamma_col > 0.0 || extra.gamma_loc > 0.0 || extra.delta_inh > 0.0)
    runs.push_back({"config", extra});
  c.resolved["dephasing_runs"] = json::array();
  for (const auto& [name, dp] : runs)
    c.resolved["dephasing_runs"].push_back({{"name", name},
                                            {"gamma_col", dp.gamma_col},
                                            {"gamma_loc", dp.gamma_loc},
                                            {"delta_inh", dp.delta_inh},
                                            {"seed", dp.seed}});
  if (c.dry_run) return;

  const int N = rp.p.N;
  const RateSet r = effective_rates(k2, rp.alpha_sq, k1 ? rp.rates.kappa_1at : 0.0);
  const ModelSpec base = build_effective_model(r, N, ProductRep{}, k1 && r.kappa_1at > 0.0);
  const Ket target = cat_state({r.alpha, Parity::Even, ProductRep{}, N});
  const DensityMatrix rho0 = DensityMatrix::basis(base.space, 0);
  std::vector<std::string> header = {"t_kappa_2at"};
  std::vector<std::vector<double>> eta;
  CsvWriter dj(c.file("fig3a_detunings.csv"), {"run", "atom", "delta_j_rad_s", "delta_j_hz"});
  for (const auto& [name, dp] : runs) {
    const DephasingTerms terms = dephasing_dissipators(dp, base.space, 0);
    for (std::size_t j = 0; j < terms.detunings.size(); ++j)
      dj.row_text({name, std::to_string(j), format_double(terms.detunings[j]),
                   format_double(to_hz(terms.detunings[j]))});
    const ModelSpec model = with_dephasing(base, terms);
    MasterOptions mo;
    mo.store_states = false;
    mo.functionals = {{"eta", [&](const DensityMatrix& rho) {
                         return preparation_error(rho, target, false);
                       }}};
    const EvolutionRecord rec = evolve_master(model, rho0, ic, mo);
    record_evolution(c, name, rec);
    header.push_back("eta_" + name);
    eta.push_back(rec.trace("eta"));
    c.report["final_eta"][name] = eta.back().back();
    c.report["clamped_detunings"][name] = terms.clamped;
  }
  dj.close();
  CsvWriter w(c.file("fig3a_eta.csv"), header,
              {"product-space effective model, N=" + std::to_string(N) + ", |alpha|^2=" +
               format_double(rp.alpha_sq) + ", delta_j seed " + std::to_string(seed)});
  for (std::size_t i = 0; i < ic.store_times.size(); ++i) {
    std::vector<double> row = {ic.store_times[i] * k2};
    for (const auto& e : eta) row.push_back(e[i]);
    w.row(row);
  }
  w.close();
}

// ---- gap_sweep ----

void run_gap_sweep(RunContext& c) {
  const ResolvedParams rp = params(c, base_defaults());
  const std::vector<double> sizes = opt_list(c, "alpha_sq_list", {1.0, 2.0, 3.0, 4.0}, true);
  const int n_max = opt_int(c, "n_max", 25, 2);
  const bool k1 = opt_bool(c, "include_kappa_1at", false);
  const int n_eigs = opt_int(c, "eigenvalues", 24, 5);
  if (!(rp.rates.kappa_2at > 0.0)) config_error("gap_sweep needs kappa_p > 0");
  if (c.dry_run) return;

  const double k2 = rp.rates.kappa_2at;
  CsvWriter w(c.file("gap_sweep.csv"),
              {"alpha_sq", "gap_rad_s", "gap_hz", "gap_over_kappa_2at", "gap_over_kappa_2at_alpha_sq",
               "kernel_dim", "complete"},
              {"bosonic effective model, n_max=" + std::to_string(n_max)});
  CsvWriter ev(c.file("gap_spectra.csv"), {"alpha_sq", "re_over_kappa_2at", "im_over_kappa_2at"});
  for (double a2 : sizes) {
    const SpectrumReport s = spectral_gap(bosonic_model(rp, a2, n_max, k1), -1.0, n_eigs);
    w.row({a2, s.gap, to_hz(s.gap), s.gap / k2, s.gap / (k2 * a2), double(s.kernel_dim),
           s.complete ? 1.0 : 0.0});
    for (const cplx& e : s.eigenvalues) ev.row({a2, e.real() / k2, e.imag() / k2});
    c.report["gaps"].push_back({{"alpha_sq", a2},
                                {"gap_over_kappa_2at", s.gap / k2},
                                {"kernel_dim", s.kernel_dim}});
  }
  w.close();
  ev.close();
}

// ---- closed forms ----

json thermal_defaults() {
  const ThermalParams t = reference_thermal();
  return {{"gamma_relax", t.gamma_relax}, {"omega_q", t.omega_q}, {"T", t.T}};
}

ThermalParams thermal(RunContext& c) {
  const ThermalParams t = resolve_thermal(c.cfg.thermal, thermal_defaults());
  c.resolved["thermal"] = {{"gamma_relax", t.gamma_relax}, {"omega_q", t.omega_q}, {"T", t.T},
                           {"n_th", t.n_th()}};
  return t;
}

void run_fig3b(RunContext& c) {
  const json d = {{"N", 100},
                  {"g_col", {{"value", 10.0}, {"unit", "MHz"}}},
                  {"J", {{"value", 30.0}, {"unit", "MHz"}}},
                  {"Delta_over_gcol", 20.0},
                  {"kappa_p_over_chi", 5.0}};
  const ResolvedParams rp = params(c, d);
  const double lo = opt_num(c, "delta_min", 5.0, true);
  const double hi = opt_num(c, "delta_max", 100.0, true);
  const int points = opt_int(c, "points", 96, 2);
  const std::vector<double> inv_us = opt_list(c, "gamma_inv_us", {10.0, 100.0, 1000.0}, true);
  const double target = opt_num(c, "target_ratio", 10.0, true);
  if (hi <= lo) config_error("options.delta_max must exceed delta_min");
  if (!(rp.p.J > 0.0)) config_error("fig3b needs J > 0");
  if (c.dry_run) return;

  const double kp_over_chi = rp.p.kappa_p / rp.rates.chi;
  const std::vector<double> grid = IntegratorConfig::linspace(lo, hi, points);
  std::vector<std::vector<FeasibilityRow>> rows;
  std::vector<std::string> header = {"Delta_over_gcol", "chi_rad_s", "chi_hz", "kappa_2at_rad_s",
                                     "kappa_2at_hz", "tau_at_over_tau_ph"};
  for (double g : inv_us) {
    const double gamma = 1e6 / g;
    rows.push_back(dephasing_feasibility(rp.p, gamma, grid, kp_over_chi));
    header.push_back("kappa_2at_over_gamma_" + format_double(g) + "us");
    double b = 0.0;
    try {
      b = feasibility_boundary(rp.p, gamma, target, kp_over_chi);
    } catch (const Error&) {
      b = std::nan("");
    }
    c.report["boundary_delta_over_gcol"][format_double(g) + "us"] = finite_or_null(b);
  }
  CsvWriter w(c.file("fig3b.csv"), header,
              {"g_col/2pi=" + format_double(to_hz(rp.rates.g_col)) + " Hz, J/2pi=" +
               format_double(to_hz(rp.p.J)) + " Hz, kappa_p/chi=" + format_double(kp_over_chi)});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const FeasibilityRow& r0 = rows[0][i];
    std::vector<double> row = {r0.delta_over_gcol, r0.chi, to_hz(r0.chi), r0.kappa_2at,
                               to_hz(r0.kappa_2at), r0.tau_ratio};
    for (const auto& rr : rows) row.push_back(rr[i].kappa_2at_over_gamma);
    w.row(row);
  }
  w.close();
}

void run_table_s1(RunContext& c) {
  const ThermalParams t = thermal(c);
  if (c.dry_run) return;
  const TableReport rep = table_s1_report(t);
  write_table_csv(rep, c.file("table_s1.csv"));
  json flagged = json::array();
  for (const auto& r : rep.rows)
    if (r.flagged)
      flagged.push_back({{"tag", r.tag}, {"alpha_sq", r.alpha_sq},
                         {"tau_mismatch", r.tau_mismatch}, {"kappa_mismatch", r.kappa_mismatch}});
  c.report["rows"] = rep.rows.size();
  c.report["flagged"] = flagged;
}

void run_lifetime(RunContext& c) {
  const json d = {{"N", 100},
                  {"g_col", {{"value", 10.0}, {"unit", "MHz"}}},
                  {"J_over_gcol", 3.0},
                  {"Delta_over_gcol", 100.0},
                  {"kappa_p_over_chi", 5.0},
                  {"kappa_s", {{"value", 10.0}, {"unit", "kHz"}}},
                  {"alpha_sq", 4.0}};
  const ResolvedParams rp = params(c, d);
  const ThermalParams t = thermal(c);
  const double lo = opt_num(c, "delta_min", 10.0, true);
  const double hi = opt_num(c, "delta_max", 300.0, true);
  const int points = opt_int(c, "points", 30, 2);
  if (hi <= lo) config_error("options.delta_max must exceed delta_min");
  if (c.dry_run) return;

  const LifetimeReport r = lifetime_report(rp.p, t, rp.alpha_sq);
  c.report["lifetime"] = {{"Gamma_1at_rad_s", r.Gamma_1at},
                          {"Gamma_1at_hz", to_hz(r.Gamma_1at)},
                          {"Gamma_relax_rad_s", r.Gamma_relax},
                          {"Gamma_relax_hz", to_hz(r.Gamma_relax)},
                          {"n_th", r.n_th},
                          {"tau_at_s", finite_or_null(r.tau_at)},
                          {"tau_ph_s", finite_or_null(r.tau_ph)},
                          {"tau_combined_s", finite_or_null(r.tau_combined)},
                          {"tau_max_s", finite_or_null(r.tau_max)},
                          {"tau_at_over_tau_ph", r.ratio},
                          {"undefined", r.undefined}};
  CsvWriter w(c.file("lifetime_vs_delta.csv"),
              {"Delta_over_gcol", "Gamma_1at_rad_s", "Gamma_1at_hz", "Gamma_relax_rad_s",
               "Gamma_relax_hz", "tau_at_s", "tau_ph_s", "tau_combined_s", "tau_max_s"});
  for (double x : IntegratorConfig::linspace(lo, hi, points)) {
    SystemParams p = rp.p;
    p.Delta = x * rp.rates.g_col;
    const LifetimeReport q = lifetime_report(p, t, rp.alpha_sq);
    w.row({x, q.Gamma_1at, to_hz(q.Gamma_1at), q.Gamma_relax, to_hz(q.Gamma_relax), q.tau_at,
           q.tau_ph, q.tau_combined, q.tau_max});
  }
  w.close();
}

std::vector<Experiment> make_registry() {
  std::vector<Experiment> r;
  r.push_back({"fig1bc", "Fig. 1(b,c): quantum-jump trajectory of the full model from |00>|2>",
               {"initial_excitations", "pump_nmax", "signal_nmax", "dicke_cut", "trajectories",
                "t_end_gcol", "points"},
               false, false, [](RunContext& c) { run_jumps(c, {2.0}); }});
  r.push_back({"figS2", "Fig. S2: residual excitations, trajectories from |00>|3> and |00>|4>",
               {"initial_excitations", "pump_nmax", "signal_nmax", "dicke_cut", "trajectories",
                "t_end_gcol", "points"},
               false, false, [](RunContext& c) { run_jumps(c, {3.0, 4.0}); }});
  r.push_back({"fig1d",
               "Fig. 1(d): preparation error of C+, C- and rho_ss (N=20 desk default, --full for N=100)",
               {"pump_nmax", "signal_nmax", "dicke_cut", "t_end_gcol", "points", "alpha0"},
               false, false, run_fig1d});
  r.push_back({"fig2a", "Fig. 2(a): bosonic preparation error for |alpha|^2 = 2, 4, 6",
               {"alpha_sq_list", "n_max", "t_end_gcol", "points", "alpha0", "include_kappa_1at"},
               false, false, run_fig2a});
  r.push_back({"fig2b", "Fig. 2(b): Wigner snapshots at |alpha|^2 = 4",
               {"times_gcol", "n_max", "grid_points", "alpha0", "include_kappa_1at"}, false, false,
               run_fig2b});
  r.push_back({"fig3a", "Fig. 3(a): dephasing suppression on the N=10 product space",
               {"ratios", "t_end_kappa_2at", "points", "include_kappa_1at"}, true,
               false, run_fig3a});
  r.push_back({"fig3b", "Fig. 3(b): kappa_2at/gamma_deph and tau_at/tau_ph versus Delta/g_col",
               {"delta_min", "delta_max", "points", "gamma_inv_us", "target_ratio"}, false, false,
               run_fig3b});
  r.push_back({"table_s1", "Table S1: photonic cat lifetimes recomputed, with this work's rows", {},
               false, true, run_table_s1, false});
  r.push_back({"gap_sweep", "Fig. 3(a) inset: Liouvillian gap versus |alpha|^2",
               {"alpha_sq_list", "n_max", "include_kappa_1at", "eigenvalues"}, false, false,
               run_gap_sweep});
  r.push_back({"lifetime", "Fig. 3(b) green line and lifetime closed forms with thermal relaxation",
               {"delta_min", "delta_max", "points"}, false, true, run_lifetime});
  return r;
}

}  // namespace

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> r = make_registry();
  return r;
}

const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

void check_blocks(const Experiment& e, const ExperimentConfig& cfg) {
  for (auto it = cfg.options.begin(); it != cfg.options.end(); ++it)
    if (std::find(e.option_keys.begin(), e.option_keys.end(), it.key()) == e.option_keys.end())
      config_error("unknown key '" + it.key() + "' in options for " + e.name);
  if (!e.uses_dephasing && !cfg.dephasing.empty())
    config_error("experiment " + e.name + " does not read a 'dephasing' block");
  if (!e.uses_params && !cfg.params.empty())
    config_error("experiment " + e.name + " does not read a 'params' block");
  if (!e.uses_thermal && !cfg.thermal.empty())
    config_error("experiment " + e.name + " does not read a 'thermal' block");
}

}  // namespace catsim::cli
