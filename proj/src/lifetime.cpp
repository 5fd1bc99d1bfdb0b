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

#include "catsim/lifetime.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "catsim/error.hpp"
#include "catsim/io.hpp"

namespace catsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inverse_or_inf(double rate) { return rate > 0.0 ? 1.0 / rate : kInf; }

double rel_diff(double computed, double listed) {
  return std::abs(computed - listed) / std::abs(listed);
}

}  // namespace

double relaxation_rate(const ThermalParams& t, double alpha_sq) {
  t.validate();
  const double n = t.n_th();
  return (2.0 * alpha_sq * (1.0 + 2.0 * n) + 2.0 * n) * t.gamma_relax;
}

LifetimeReport lifetime_report(const SystemParams& p, const ThermalParams& t, double alpha_sq) {
  p.validate();
  if (!(alpha_sq > 0.0)) fail(ErrorCode::Domain, "lifetime_report needs |alpha|^2 > 0");
  if (p.Delta == 0.0) fail(ErrorCode::Division, "lifetime_report needs Delta != 0");
  const double gc = p.g_col();
  if (!(gc > 0.0)) fail(ErrorCode::Division, "lifetime_report needs g_col > 0");
  LifetimeReport r;
  const double ratio = p.Delta / gc;
  r.ratio = ratio * ratio;
  const double kappa_1at = p.kappa_s / r.ratio;
  r.n_th = t.n_th();
  r.Gamma_1at = 2.0 * alpha_sq * kappa_1at;
  r.Gamma_relax = relaxation_rate(t, alpha_sq);
  r.tau_at = inverse_or_inf(r.Gamma_1at);
  r.tau_ph = inverse_or_inf(2.0 * alpha_sq * p.kappa_s);
  r.tau_max = inverse_or_inf(r.Gamma_relax);
  r.tau_combined = inverse_or_inf(r.Gamma_1at + r.Gamma_relax);
  r.undefined = r.Gamma_1at == 0.0 && r.Gamma_relax == 0.0;
  return r;
}

double photonic_lifetime(double alpha_sq, double kappa_s) {
  if (!(alpha_sq > 0.0) || !(kappa_s > 0.0))
    fail(ErrorCode::Domain, "photonic_lifetime needs positive |alpha|^2 and kappa_s");
  return 1.0 / (2.0 * alpha_sq * kappa_s);
}

ThermalParams reference_thermal() {
  ThermalParams t;
  t.omega_q = from_hz(3e9);
  t.T = 0.1;
  t.gamma_relax = from_hz(4e-3);
  return t;
}

TableReport table_s1_report(const ThermalParams& thermal) {
  struct Input {
    const char* tag;
    const char* approach;
    double alpha_sq, T_c_us, kappa_khz;
    double tau_exp;  // < 0: not reported
    double tau_theor;
  };
  static const Input literature[] = {
      {"deleglise2008", "unitary evolution", 3.0, 1.3e5, 1.2e-3, 1.7e4, 2.2e4},
      {"lescanne2020", "reservoir engineering", 5.8, 3.0, 53.0, 0.2, 0.26},
      {"vlastakis2013", "unitary evolution", 28.0, 22.1, 7.2, -1.0, 0.4},
      {"leghtas2015", "reservoir engineering", 2.4, 20.0, 8.0, -1.0, 4.1},
      {"touzard2018", "reservoir engineering", 5.0, 92.0, 1.7, 8.0, 9.2},
      {"brune1996", "unitary evolution", 3.3, 160.0, 1.0, 38.4, 35.0},
      {"wang2019", "unitary evolution", 1.4, 0.14, 1.1e3, -1.0, 5.3e-2},
      {"assemat2019", "unitary evolution", 11.3, 8.1e3, 2.0e-2, 200.0, 360.0},
      {"xu2020", "unitary evolution", 2.0, 692.0, 0.2, -1.0, 173.0},
  };
  TableReport rep;
  for (const Input& in : literature) {
    TableRow r;
    r.tag = in.tag;
    r.approach = in.approach;
    r.alpha_sq = in.alpha_sq;
    r.T_c_us = in.T_c_us;
    r.kappa_s_over_2pi_khz_listed = in.kappa_khz;
    if (in.tau_exp >= 0.0) r.tau_exp_us = in.tau_exp;
    r.tau_theor_listed_us = in.tau_theor;
    r.kappa_s = 1e6 / in.T_c_us;
    r.kappa_s_over_2pi_khz = to_hz(r.kappa_s) * 1e-3;
    r.tau_theor_us = photonic_lifetime(in.alpha_sq, r.kappa_s) * 1e6;
    r.kappa_mismatch = rel_diff(r.kappa_s_over_2pi_khz, in.kappa_khz);
    r.tau_mismatch = rel_diff(r.tau_theor_us, in.tau_theor);
    r.flagged = r.kappa_mismatch > rep.tolerance || r.tau_mismatch > rep.tolerance;
    rep.rows.push_back(r);
  }

  // Atomic-ensemble rows: |alpha|^2 = 4, (Delta/g_col)^2 = 1e4, kappa_s given
  // directly; T_c follows from it. Thermal relaxation enters via tau_combined.
  struct Ours {
    double T_c_us, kappa_khz, tau_theor;
  };
  static const Ours ours[] = {{16.0, 10.0, 2e4}, {5.3e3, 3.0e-2, 2e6}};
  for (const Ours& o : ours) {
    SystemParams p;
    p.N = 1;
    p.g = 1.0;
    p.Delta = 100.0;
    p.kappa_s = from_hz(o.kappa_khz * 1e3);
    const LifetimeReport lr = lifetime_report(p, thermal, 4.0);
    TableRow r;
    r.tag = "this_work";
    r.approach = "reservoir engineering";
    r.alpha_sq = 4.0;
    r.T_c_us = o.T_c_us;
    r.kappa_s_over_2pi_khz_listed = o.kappa_khz;
    r.tau_theor_listed_us = o.tau_theor;
    r.kappa_s = p.kappa_s;
    r.kappa_s_over_2pi_khz = o.kappa_khz;
    r.tau_theor_us = lr.tau_combined * 1e6;
    r.kappa_mismatch = rel_diff(1e6 / p.kappa_s, o.T_c_us);
    r.tau_mismatch = rel_diff(r.tau_theor_us, o.tau_theor);
    r.flagged = r.kappa_mismatch > rep.tolerance || r.tau_mismatch > rep.tolerance;
    rep.rows.push_back(r);
  }
  return rep;
}

void write_table_csv(const TableReport& t, const std::string& path) {
  CsvWriter w(path,
              {"ref_tag", "approach", "alpha_sq", "T_c_us", "kappa_s_rad_per_s",
               "kappa_s_over_2pi_Hz", "kappa_s_over_2pi_kHz_listed", "tau_exp_us",
               "tau_theor_us", "tau_theor_listed_us", "tau_rel_mismatch", "flagged"},
              {"tau_theor = 1/(2 |alpha|^2 kappa_s); literature rows use kappa_s = 1/T_c",
               "this_work rows: kappa_s from the listed kappa_s/2pi, (Delta/g_col)^2 = 1e4, "
               "thermal relaxation included",
               "flagged: kappa_s or tau_theor differs from the listed value by more than 10%"});
  for (const auto& r : t.rows)
    w.row_text({r.tag, r.approach, format_double(r.alpha_sq), format_double(r.T_c_us),
                format_double(r.kappa_s), format_double(to_hz(r.kappa_s)),
                format_double(r.kappa_s_over_2pi_khz_listed),
                r.tau_exp_us ? format_double(*r.tau_exp_us) : "",
                format_double(r.tau_theor_us), format_double(r.tau_theor_listed_us),
                format_double(r.tau_mismatch), r.flagged ? "1" : "0"});
  w.close();
}

std::vector<FeasibilityRow> dephasing_feasibility(const SystemParams& p, double gamma_deph,
                                                  const std::vector<double>& delta_over_gcol,
                                                  double kappa_p_over_chi) {
  if (!(gamma_deph > 0.0)) fail(ErrorCode::Domain, "gamma_deph must be positive");
  if (!(kappa_p_over_chi > 0.0)) fail(ErrorCode::Domain, "kappa_p/chi must be positive");
  const double gc = p.g_col();
  std::vector<FeasibilityRow> out;
  for (double x : delta_over_gcol) {
    if (!(x > 0.0)) fail(ErrorCode::Domain, "Delta/g_col grid values must be positive");
    FeasibilityRow r;
    r.delta_over_gcol = x;
    r.chi = gc * gc * p.J / (x * gc * x * gc);
    r.kappa_2at = 4.0 * r.chi / kappa_p_over_chi;  // 4 chi^2 / (k chi)
    r.kappa_2at_over_gamma = r.kappa_2at / gamma_deph;
    r.tau_ratio = x * x;
    out.push_back(r);
  }
  return out;
}

double feasibility_boundary(const SystemParams& p, double gamma_deph, double target,
                            double kappa_p_over_chi) {
  // kappa_2at = (4 / k) J / x^2
  return std::sqrt(4.0 * p.J / (kappa_p_over_chi * target * gamma_deph));
}

DecayFit fit_coherence_decay(const std::vector<double>& t, const std::vector<double>& c,
                             double efolds) {
  if (t.size() != c.size() || t.size() < 4)
    fail(ErrorCode::Domain, "fit_coherence_decay needs at least four samples");
  if (!(c[0] > 0.0)) fail(ErrorCode::Domain, "initial coherence must be positive");
  const double floor = std::log(c[0]) - efolds;
  std::size_t n = 0;
  while (n < t.size() && c[n] > 0.0 && std::log(c[n]) >= floor) ++n;
  if (n < 4) fail(ErrorCode::Domain, "too few samples inside the fit window");
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = t[i] - t[0];
    a(i, 0) = 1.0;
    a(i, 1) = s;
    a(i, 2) = s * s;
    y[i] = std::log(c[i]);
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  return {-coef[1], n, t[n - 1]};
}

}  // namespace catsim
