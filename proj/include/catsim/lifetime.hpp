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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catsim/models.hpp"

namespace catsim {

struct LifetimeReport {
  double Gamma_1at = 0.0;    // rad/s
  double Gamma_relax = 0.0;  // rad/s
  double n_th = 0.0;
  double tau_at = 0.0;        // 1 / Gamma_1at
  double tau_ph = 0.0;        // 1 / (2 |alpha|^2 kappa_s)
  double tau_combined = 0.0;  // 1 / (Gamma_1at + Gamma_relax)
  double tau_max = 0.0;       // 1 / Gamma_relax
  double ratio = 0.0;         // tau_at / tau_ph = (Delta / g_col)^2
  bool undefined = false;     // no decay channel at all
};

LifetimeReport lifetime_report(const SystemParams& p, const ThermalParams& t, double alpha_sq);
double photonic_lifetime(double alpha_sq, double kappa_s);
double relaxation_rate(const ThermalParams& t, double alpha_sq);

struct TableRow {
  std::string tag;
  std::string approach;
  double alpha_sq = 0.0;
  double T_c_us = 0.0;
  double kappa_s_over_2pi_khz_listed = 0.0;
  std::optional<double> tau_exp_us;
  double tau_theor_listed_us = 0.0;
  // computed
  double kappa_s = 0.0;  // rad/s, from T_c
  double kappa_s_over_2pi_khz = 0.0;
  double tau_theor_us = 0.0;
  double kappa_mismatch = 0.0;  // relative
  double tau_mismatch = 0.0;    // relative
  bool flagged = false;         // either mismatch above 10 %
};

struct TableReport {
  std::vector<TableRow> rows;
  double tolerance = 0.10;
};

// Embedded literature rows plus the two atomic-ensemble rows.
TableReport table_s1_report(const ThermalParams& thermal = {});
void write_table_csv(const TableReport& t, const std::string& path);

// Thermal environment of the atomic rows: omega_q = 2 pi 3 GHz, T = 100 mK,
// gamma_relax = 2 pi 4 mHz.
ThermalParams reference_thermal();

struct FeasibilityRow {
  double delta_over_gcol = 0.0;
  double chi = 0.0;        // rad/s
  double kappa_2at = 0.0;  // rad/s
  double kappa_2at_over_gamma = 0.0;
  double tau_ratio = 0.0;  // (Delta / g_col)^2
};

// kappa_p = kappa_p_over_chi * chi; g_col and J taken from p.
std::vector<FeasibilityRow> dephasing_feasibility(const SystemParams& p, double gamma_deph,
                                                  const std::vector<double>& delta_over_gcol,
                                                  double kappa_p_over_chi = 5.0);
// Delta / g_col at which kappa_2at = target * gamma_deph.
double feasibility_boundary(const SystemParams& p, double gamma_deph, double target,
                            double kappa_p_over_chi = 5.0);

struct DecayFit {
  double rate = 0.0;
  std::size_t points = 0;
  double window_end = 0.0;
};

// Least-squares fit of log c(t) = c0 - rate t + q t^2 over the window in
// which c has fallen by at most `efolds` e-foldings; rate is the initial
// decay rate.
DecayFit fit_coherence_decay(const std::vector<double>& t, const std::vector<double>& c,
                             double efolds = 2.0);

inline double to_hz(double rad_per_s) { return rad_per_s / (2.0 * M_PI); }
inline double from_hz(double hz) { return 2.0 * M_PI * hz; }

}  // namespace catsim
