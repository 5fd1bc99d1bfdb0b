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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "catsim/hilbert.hpp"

namespace catsim {

// All rates and couplings in angular units (rad/s, or any consistent unit).
struct SystemParams {
  int N = 1;
  double g = 0.0;  // single-atom coupling; collective coupling is sqrt(N) g
  double J = 0.0;
  double Omega = 0.0;
  double delta_p = 0.0;
  double delta_s = 0.0;
  double delta_q = 0.0;
  double Delta = 0.0;        // omega_s - omega_q
  double Delta_prime = 0.0;  // 2 omega_s - omega_p
  double kappa_p = 0.0;
  double kappa_s = 0.0;

  double g_col() const;
  void set_g_col(double g_col);
  void validate() const;

  // Frame with the ensemble on resonance (delta_q = 0): delta_s = Delta,
  // delta_p = 0 and Delta' = 2 Delta, before any Lamb-shift compensation.
  static SystemParams resonant(int N, double g_col, double J, double Delta);
};

struct RateSet {
  double g_col = 0.0;
  double chi = 0.0;
  double kappa_2at = 0.0;
  double chi_2at = 0.0;
  double kappa_1at = 0.0;
  cplx alpha = 0.0;

  double alpha_sq() const { return std::norm(alpha); }
};

RateSet derive_rates(const SystemParams& p);
// Direct parametrisation of the effective model: chi_2at = |alpha|^2 kappa_2at / 2.
RateSet effective_rates(double kappa_2at, double alpha_sq, double kappa_1at = 0.0);

// Omega giving the requested |alpha|^2 at the current chi.
double omega_for_alpha_sq(const SystemParams& p, double alpha_sq);

// Shift delta_p so the two-excitation <-> pump-photon exchange stays resonant
// despite the second-order Lamb shifts; Delta' is updated self-consistently.
SystemParams compensate_second_order(SystemParams p);

struct Truncations {
  int pump = 4;
  int signal = 2;
  int dicke_cut = -1;  // -1: default_dicke_cutoff
};

int default_dicke_cutoff(int N, double alpha_sq);

struct Dissipator {
  double rate = 0.0;
  LinOp jump;
  std::string label;
};

struct ModelSpec {
  SpaceDescriptor space;
  LinOp hamiltonian;
  std::vector<Dissipator> dissipators;
  std::string label;

  // Zero rates are dropped so jump selection never sees dead channels.
  void add_dissipator(double rate, LinOp jump, std::string label);
  double largest_rate() const;
  void validate() const;
};

// Slot layout: pump, signal, Dicke.
ModelSpec build_full_model(const SystemParams& p, const Truncations& t);
// Slot layout: pump, Dicke. The signal mode is eliminated; the optional
// Purcell channel (kappa_1at/N, S-) stands in for its loss.
ModelSpec build_time_averaged_model(const SystemParams& p, const Truncations& t,
                                    bool include_purcell = false);

struct DickeRep {
  int n_cut = -1;  // -1: default_dicke_cutoff
};
struct BosonicRep {
  int n_max = 20;
};
struct ProductRep {};
using EnsembleRep = std::variant<DickeRep, BosonicRep, ProductRep>;

ModelSpec build_effective_model(const SystemParams& p, const EnsembleRep& rep,
                                bool include_kappa_1at);
ModelSpec build_effective_model(const RateSet& r, int N, const EnsembleRep& rep,
                                bool include_kappa_1at);

struct SecondOrderHamiltonian {
  LinOp full;
  LinOp reduced;
};

// Same slot layout as build_full_model.
SecondOrderHamiltonian build_second_order_hamiltonian(const SystemParams& p,
                                                      const Truncations& t);

struct DephasingParams {
  double gamma_col = 0.0;
  double gamma_loc = 0.0;
  double delta_inh = 0.0;
  std::uint64_t seed = 0;
  void validate() const;
};

struct DephasingTerms {
  std::vector<Dissipator> dissipators;
  LinOp inhomogeneous;
  std::vector<double> detunings;  // sampled delta_j, product rep only
  int clamped = 0;
};

inline constexpr double kLorentzianClamp = 50.0;

// Lorentzian(0, hwhm) by inverse CDF, clamped to +-50 hwhm.
std::vector<double> sample_lorentzian(std::size_t count, double hwhm, std::uint64_t seed,
                                      int* clamped = nullptr);

// The ensemble factor at `slot` selects the representation: Dicke allows only
// collective dephasing, SpinHalfProduct all three mechanisms.
DephasingTerms dephasing_dissipators(const DephasingParams& d, const SpaceDescriptor& space,
                                     std::size_t slot);
ModelSpec with_dephasing(ModelSpec model, const DephasingTerms& terms);

struct ThermalParams {
  double gamma_relax = 0.0;
  double omega_q = 0.0;
  double T = 0.0;  // kelvin

  double n_th() const;
  void validate() const;
};

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kBoltzmann = 1.380649e-23;

double thermal_occupation(double omega, double T);
std::vector<Dissipator> thermal_dissipators(const ThermalParams& t, int n_max);

}  // namespace catsim
