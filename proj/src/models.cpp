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

#include "catsim/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catsim/diagnostics.hpp"
#include "catsim/error.hpp"
#include "catsim/rng.hpp"

namespace catsim {

namespace {

const cplx I(0.0, 1.0);

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    fail(ErrorCode::Domain, std::string(name) + " must be a finite non-negative number");
}

Dissipator make_dissipator(double rate, LinOp jump, std::string label) {
  return Dissipator{rate, std::move(jump), std::move(label)};
}

}  // namespace

double SystemParams::g_col() const { return std::sqrt(double(N)) * g; }

void SystemParams::set_g_col(double g_col) { g = g_col / std::sqrt(double(N)); }

void SystemParams::validate() const {
  if (N < 1) fail(ErrorCode::Domain, "N must be >= 1");
  require_nonneg(g, "g");
  require_nonneg(J, "J");
  require_nonneg(Omega, "Omega");
  require_nonneg(kappa_p, "kappa_p");
  require_nonneg(kappa_s, "kappa_s");
  for (double d : {delta_p, delta_s, delta_q, Delta, Delta_prime})
    if (!std::isfinite(d)) fail(ErrorCode::Domain, "detunings must be finite");
}

SystemParams SystemParams::resonant(int N, double g_col, double J, double Delta) {
  SystemParams p;
  p.N = N;
  p.set_g_col(g_col);
  p.J = J;
  p.Delta = Delta;
  p.delta_q = 0.0;
  p.delta_s = Delta;
  p.delta_p = 0.0;
  p.Delta_prime = 2.0 * Delta;
  return p;
}

RateSet derive_rates(const SystemParams& p) {
  p.validate();
  if (p.Delta == 0.0)
    fail(ErrorCode::Division, "derive_rates: Delta = 0 makes chi and kappa_1at diverge");
  if (p.kappa_p == 0.0)
    fail(ErrorCode::Division, "derive_rates: kappa_p = 0 makes kappa_2at and chi_2at diverge");
  RateSet r;
  r.g_col = p.g_col();
  const double ratio = r.g_col / p.Delta;
  r.chi = ratio * ratio * p.J;
  r.kappa_2at = 4.0 * r.chi * r.chi / p.kappa_p;
  r.chi_2at = 2.0 * p.Omega * r.chi / p.kappa_p;
  r.kappa_1at = ratio * ratio * p.kappa_s;
  if (r.chi > 0.0)
    r.alpha = I * std::sqrt(p.Omega / r.chi);
  else if (p.Omega > 0.0)
    fail(ErrorCode::Division, "derive_rates: chi = 0 with a nonzero drive leaves alpha undefined");
  return r;
}

RateSet effective_rates(double kappa_2at, double alpha_sq, double kappa_1at) {
  require_nonneg(kappa_2at, "kappa_2at");
  require_nonneg(alpha_sq, "alpha_sq");
  require_nonneg(kappa_1at, "kappa_1at");
  RateSet r;
  r.kappa_2at = kappa_2at;
  r.chi_2at = 0.5 * alpha_sq * kappa_2at;
  r.kappa_1at = kappa_1at;
  r.alpha = I * std::sqrt(alpha_sq);
  return r;
}

double omega_for_alpha_sq(const SystemParams& p, double alpha_sq) {
  SystemParams q = p;
  q.Omega = 0.0;
  if (q.kappa_p == 0.0) q.kappa_p = 1.0;  // chi does not depend on kappa_p
  return alpha_sq * derive_rates(q).chi;
}

SystemParams compensate_second_order(SystemParams p) {
  if (p.Delta == 0.0) fail(ErrorCode::Division, "compensation needs Delta != 0");
  // Lamb shift of the two-excitation Dicke state with the signal in vacuum:
  // -(g^2/Delta) <S+S-> = -2 g^2 (N-1) / Delta.
  const double ens_shift = -2.0 * p.g * p.g * (p.N - 1) / p.Delta;
  double dp = p.delta_p;
  for (int it = 0; it < 200; ++it) {
    const double dprime = 2.0 * p.delta_s - dp;
    if (dprime == 0.0) fail(ErrorCode::Division, "compensation hit Delta' = 0");
    const double next = 2.0 * p.delta_q + 2.0 * p.J * p.J / dprime + ens_shift;
    if (std::abs(next - dp) < 1e-15 * std::max(1.0, std::abs(next))) {
      dp = next;
      break;
    }
    dp = next;
  }
  p.delta_p = dp;
  p.Delta_prime = 2.0 * p.delta_s - dp;
  return p;
}

int default_dicke_cutoff(int N, double alpha_sq) {
  return std::min(N, static_cast<int>(std::ceil(6.0 * alpha_sq - 1e-9)) + 10);
}

void ModelSpec::add_dissipator(double rate, LinOp jump, std::string lbl) {
  require_nonneg(rate, "dissipator rate");
  if (rate == 0.0) return;
  if (!(jump.space() == space))
    fail(ErrorCode::Assembly, "dissipator '" + lbl + "' lives on a different space");
  dissipators.push_back(make_dissipator(rate, std::move(jump), std::move(lbl)));
}

double ModelSpec::largest_rate() const {
  double m = 0.0;
  for (const auto& d : dissipators) m = std::max(m, d.rate);
  const auto& h = hamiltonian.matrix();
  for (Index k = 0; k < h.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

void ModelSpec::validate() const {
  if (!(hamiltonian.space() == space))
    fail(ErrorCode::Assembly, "Hamiltonian space does not match model space");
  hamiltonian.require_hermitian("Hamiltonian of '" + label + "'");
  for (const auto& d : dissipators) {
    require_nonneg(d.rate, "dissipator rate");
    if (!(d.jump.space() == space))
      fail(ErrorCode::Assembly, "dissipator '" + d.label + "' lives on a different space");
  }
}

ModelSpec build_full_model(const SystemParams& p, const Truncations& t) {
  p.validate();
  const int ncut = t.dicke_cut < 0 ? p.N : t.dicke_cut;
  SpaceDescriptor sp({Factor::fock(t.pump), Factor::fock(t.signal), Factor::dicke(p.N, ncut)});
  const LinOp ap = embed(fock_destroy(t.pump), sp, 0);
  const LinOp as = embed(fock_destroy(t.signal), sp, 1);
  const LinOp sm = embed(dicke_lowering(p.N, ncut), sp, 2);
  const LinOp sz = embed(dicke_sz(p.N, ncut), sp, 2);
  const LinOp apd = ap.adjoint(), asd = as.adjoint(), sp_ = sm.adjoint();

  LinOp h = p.delta_p * (apd * ap) + p.delta_s * (asd * as) + p.delta_q * sz;
  const LinOp pair = ap * asd * asd;
  h += p.J * (pair + pair.adjoint());
  const LinOp exch = as * sp_;
  h += p.g * (exch + exch.adjoint());
  h += p.Omega * (ap + apd);

  ModelSpec m{sp, h, {}, "full"};
  m.add_dissipator(p.kappa_p, ap, "kappa_p a_p");
  m.add_dissipator(p.kappa_s, as, "kappa_s a_s");
  m.validate();
  return m;
}

ModelSpec build_time_averaged_model(const SystemParams& p, const Truncations& t,
                                    bool include_purcell) {
  const RateSet r = derive_rates(p);
  const int ncut = t.dicke_cut < 0 ? default_dicke_cutoff(p.N, r.alpha_sq()) : t.dicke_cut;
  SpaceDescriptor sp({Factor::fock(t.pump), Factor::dicke(p.N, ncut)});
  const LinOp ap = embed(fock_destroy(t.pump), sp, 0);
  const LinOp sm = embed(dicke_lowering(p.N, ncut), sp, 1);
  const LinOp term = ap.adjoint() * sm * sm;
  LinOp h = (r.chi / p.N) * (term + term.adjoint());
  h += p.Omega * (ap + ap.adjoint());
  ModelSpec m{sp, h, {}, "time_averaged"};
  m.add_dissipator(p.kappa_p, ap, "kappa_p a_p");
  if (include_purcell) m.add_dissipator(r.kappa_1at / p.N, sm, "kappa_1at/N S-");
  m.validate();
  return m;
}

ModelSpec build_effective_model(const SystemParams& p, const EnsembleRep& rep,
                                bool include_kappa_1at) {
  return build_effective_model(derive_rates(p), p.N, rep, include_kappa_1at);
}

ModelSpec build_effective_model(const RateSet& r, int N, const EnsembleRep& rep,
                                bool include_kappa_1at) {
  if (N < 1) fail(ErrorCode::Domain, "N must be >= 1");
  if (const auto* b = std::get_if<BosonicRep>(&rep)) {
    const LinOp a = fock_destroy(b->n_max);
    const LinOp a2 = a * a;
    ModelSpec m{a.space(), (I * r.chi_2at) * (a2 - a2.adjoint()), {}, "effective_bosonic"};
    if (include_kappa_1at) m.add_dissipator(r.kappa_1at, a, "kappa_1at b");
    m.add_dissipator(r.kappa_2at, a2, "kappa_2at b^2");
    m.validate();
    return m;
  }
  LinOp sm;
  std::string label;
  if (const auto* d = std::get_if<DickeRep>(&rep)) {
    const int ncut = d->n_cut < 0 ? default_dicke_cutoff(N, r.alpha_sq()) : d->n_cut;
    sm = dicke_lowering(N, ncut);
    label = "effective_dicke";
  } else {
    sm = product_spin_ops(N).s_minus;
    label = "effective_product";
  }
  const LinOp s2 = sm * sm;
  const double n = N;
  ModelSpec m{sm.space(), (I * (r.chi_2at / n)) * (s2 - s2.adjoint()), {}, label};
  if (include_kappa_1at) m.add_dissipator(r.kappa_1at / n, sm, "kappa_1at/N S-");
  m.add_dissipator(r.kappa_2at / (n * n), s2, "kappa_2at/N^2 S-^2");
  m.validate();
  return m;
}

SecondOrderHamiltonian build_second_order_hamiltonian(const SystemParams& p,
                                                      const Truncations& t) {
  p.validate();
  if (p.Delta == 0.0) fail(ErrorCode::Division, "second-order Hamiltonian needs Delta != 0");
  if (p.Delta_prime == 0.0)
    fail(ErrorCode::Division, "second-order Hamiltonian needs Delta' != 0");
  const int ncut = t.dicke_cut < 0 ? p.N : t.dicke_cut;
  SpaceDescriptor sp({Factor::fock(t.pump), Factor::fock(t.signal), Factor::dicke(p.N, ncut)});
  const LinOp ap = embed(fock_destroy(t.pump), sp, 0);
  const LinOp as = embed(fock_destroy(t.signal), sp, 1);
  const LinOp sm = embed(dicke_lowering(p.N, ncut), sp, 2);
  const LinOp sz = embed(dicke_sz(p.N, ncut), sp, 2);
  const LinOp np = ap.adjoint() * ap, ns = as.adjoint() * as;
  const LinOp as2 = as * as;

  LinOp full = (-p.g * p.g / p.Delta) * (2.0 * (ns * sz) + sm.adjoint() * sm);
  full += (-p.J * p.J / p.Delta_prime) *
          (2.0 * np - as2.adjoint() * as2 + 4.0 * (np * ns));

  const LinOp id = LinOp::identity(sp);
  const double gc = p.g_col();
  LinOp reduced = (-gc * gc / p.Delta) * (sz + (0.5 * p.N) * id);
  reduced += (-2.0 * p.J * p.J / p.Delta_prime) * np;
  return {full, reduced};
}

void DephasingParams::validate() const {
  require_nonneg(gamma_col, "gamma_col");
  require_nonneg(gamma_loc, "gamma_loc");
  require_nonneg(delta_inh, "delta_inh");
}

std::vector<double> sample_lorentzian(std::size_t count, double hwhm, std::uint64_t seed,
                                      int* clamped) {
  require_nonneg(hwhm, "Lorentzian width");
  Rng rng(seed);
  std::vector<double> out(count);
  int nclamp = 0;
  const double lim = kLorentzianClamp * hwhm;
  for (auto& x : out) {
    const double u = rng.uniform();
    double v = hwhm * std::tan(M_PI * (u - 0.5));
    if (std::abs(v) > lim) {
      v = std::copysign(lim, v);
      ++nclamp;
    }
    x = v;
  }
  if (clamped) *clamped = nclamp;
  return out;
}

DephasingTerms dephasing_dissipators(const DephasingParams& d, const SpaceDescriptor& space,
                                     std::size_t slot) {
  d.validate();
  const Factor& f = space.factor(slot);
  DephasingTerms out;
  out.inhomogeneous = LinOp::zero(space);
  if (const auto* dk = std::get_if<Dicke>(&f.kind())) {
    if (d.gamma_loc > 0.0 || d.delta_inh > 0.0)
      fail(ErrorCode::Representation,
           "local dephasing and inhomogeneous broadening need the spin-product representation");
    if (d.gamma_col > 0.0)
      out.dissipators.push_back(make_dissipator(
          d.gamma_col, embed(dicke_sz(dk->atoms, dk->n_cut), space, slot), "gamma_col Sz"));
    return out;
  }
  const auto* pr = std::get_if<SpinHalfProduct>(&f.kind());
  if (!pr) fail(ErrorCode::Representation, "dephasing needs a Dicke or spin-product factor");
  const ProductSpinOps ops = product_spin_ops(pr->spins);
  if (d.gamma_col > 0.0)
    out.dissipators.push_back(make_dissipator(d.gamma_col, embed(ops.s_z, space, slot),
                                              "gamma_col Sz"));
  if (d.gamma_loc > 0.0)
    for (int j = 0; j < pr->spins; ++j)
      out.dissipators.push_back(make_dissipator(
          d.gamma_loc, embed(ops.sigma_z[j], space, slot),
          "gamma_loc sigma_z[" + std::to_string(j) + "]"));
  if (d.delta_inh > 0.0) {
    out.detunings = sample_lorentzian(pr->spins, d.delta_inh, d.seed, &out.clamped);
    if (out.clamped > 0)
      warn("inhomogeneous broadening: " + std::to_string(out.clamped) +
           " detuning(s) clamped to +-50 linewidths");
    LinOp h = LinOp::zero(ops.s_z.space());
    for (int j = 0; j < pr->spins; ++j) h += (0.5 * out.detunings[j]) * ops.sigma_z[j];
    out.inhomogeneous = embed(h, space, slot);
  }
  return out;
}

ModelSpec with_dephasing(ModelSpec model, const DephasingTerms& terms) {
  if (!(terms.inhomogeneous.space() == model.space))
    fail(ErrorCode::Assembly, "dephasing terms built for a different space");
  model.hamiltonian += terms.inhomogeneous;
  for (const auto& d : terms.dissipators) model.add_dissipator(d.rate, d.jump, d.label);
  model.validate();
  return model;
}

double thermal_occupation(double omega, double T) {
  require_nonneg(omega, "omega_q");
  require_nonneg(T, "temperature");
  if (T == 0.0) return 0.0;
  if (omega == 0.0) fail(ErrorCode::Division, "thermal occupation diverges at omega_q = 0");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * T));
}

double ThermalParams::n_th() const { return thermal_occupation(omega_q, T); }

void ThermalParams::validate() const {
  require_nonneg(gamma_relax, "gamma_relax");
  require_nonneg(omega_q, "omega_q");
  require_nonneg(T, "T");
}

std::vector<Dissipator> thermal_dissipators(const ThermalParams& t, int n_max) {
  t.validate();
  const LinOp b = fock_destroy(n_max);
  const double n = t.n_th();
  std::vector<Dissipator> out;
  out.push_back(make_dissipator(t.gamma_relax * (n + 1.0), b, "gamma_relax (n_th+1) b"));
  out.push_back(make_dissipator(t.gamma_relax * n, b.adjoint(), "gamma_relax n_th b^dag"));
  return out;
}

}  // namespace catsim
