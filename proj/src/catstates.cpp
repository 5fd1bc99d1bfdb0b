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

#include "catsim/catstates.hpp"

#include <cmath>
#include <algorithm>
#include <sstream>
#include <vector>

#include "catsim/diagnostics.hpp"
#include "catsim/error.hpp"
#include "catsim/special.hpp"

namespace catsim {

namespace {

int dicke_cut_for(const DickeRep& d, int N, double alpha_sq) {
  return d.n_cut < 0 ? default_dicke_cutoff(N, alpha_sq) : d.n_cut;
}

void check_dicke_regime(int N, double alpha_sq) {
  if (N < 1) fail(ErrorCode::Domain, "cat in an ensemble representation needs N >= 1");
  if (alpha_sq > 0.25 * N) {
    std::ostringstream os;
    os << "|alpha|^2 = " << alpha_sq << " exceeds N/4 = " << 0.25 * N
       << "; the ensemble is outside the low-excitation regime";
    fail(ErrorCode::Domain, os.str());
  }
  if (alpha_sq > 0.1 * N) {
    std::ostringstream os;
    os << "|alpha|^2 = " << alpha_sq << " is above N/10 for N = " << N
       << "; ensemble cats deviate from their bosonic counterparts";
    warn(os.str());
  }
}

Ket combine(const Ket& plus_leg, const Ket& minus_leg, Parity parity) {
  DenseVector v = parity == Parity::Even ? DenseVector(plus_leg.amplitudes() + minus_leg.amplitudes())
                                         : DenseVector(plus_leg.amplitudes() - minus_leg.amplitudes());
  Ket k(plus_leg.space(), std::move(v));
  return k.normalize();
}

Ket dicke_cat(cplx alpha, Parity parity, int N, int n_cut) {
  double theta, phi;
  spin_angles(N, alpha, theta, phi);
  if (std::abs(alpha) == 0.0) {
    Ket k = Ket::basis(SpaceDescriptor({Factor::dicke(N, n_cut)}), parity == Parity::Even ? 0 : 1);
    return k;
  }
  return combine(spin_coherent(N, theta, phi, n_cut), spin_coherent(N, theta, phi + M_PI, n_cut),
                 parity);
}

}  // namespace

Ket coherent_state(cplx alpha, int n_max) {
  SpaceDescriptor sp({Factor::fock(n_max)});
  const double a2 = std::norm(alpha);
  if (a2 > 0.5 * n_max) {
    std::ostringstream os;
    os << "coherent state with |alpha|^2 = " << a2 << " needs n_max >= " << 2.0 * a2
       << " (got " << n_max << ")";
    fail(ErrorCode::InvalidTruncation, os.str());
  }
  DenseVector v(n_max + 1);
  v[0] = std::exp(-0.5 * a2);
  for (int n = 1; n <= n_max; ++n) v[n] = v[n - 1] * alpha / std::sqrt(double(n));
  Ket k(sp, std::move(v));
  return k.normalize();
}

Ket spin_coherent(int N, double theta, double phi, int n_cut) {
  if (!(theta >= 0.0 && theta < M_PI))
    fail(ErrorCode::Domain, "spin_coherent needs 0 <= theta < pi");
  SpaceDescriptor sp({Factor::dicke(N, n_cut)});
  DenseVector v = DenseVector::Zero(n_cut + 1);
  if (theta == 0.0) {
    v[0] = 1.0;
    return Ket(sp, std::move(v));
  }
  const double lc = std::log(std::cos(0.5 * theta)), ls = std::log(std::sin(0.5 * theta));
  for (int n = 0; n <= n_cut; ++n) {
    const double lbin = std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0);
    const double mag = std::exp(0.5 * lbin + (N - n) * lc + n * ls);
    v[n] = std::polar(mag, n * phi);
  }
  Ket k(sp, std::move(v));
  return k.normalize();
}

void spin_angles(int N, cplx alpha, double& theta, double& phi) {
  theta = 2.0 * std::atan(std::abs(alpha) / std::sqrt(double(N)));
  phi = std::abs(alpha) > 0.0 ? std::arg(alpha) : 0.0;
}

double cat_normalization(double alpha_sq, Parity parity) {
  const double e = std::exp(-2.0 * alpha_sq);
  return 1.0 / std::sqrt(2.0 * (parity == Parity::Even ? 1.0 + e : 1.0 - e));
}

Ket cat_state(const CatParams& p) {
  const double a2 = std::norm(p.alpha);
  if (const auto* b = std::get_if<BosonicRep>(&p.rep)) {
    if (a2 == 0.0)
      return Ket::basis(SpaceDescriptor({Factor::fock(b->n_max)}), p.parity == Parity::Even ? 0 : 1);
    return combine(coherent_state(p.alpha, b->n_max), coherent_state(-p.alpha, b->n_max), p.parity);
  }
  check_dicke_regime(p.N, a2);
  if (const auto* d = std::get_if<DickeRep>(&p.rep))
    return dicke_cat(p.alpha, p.parity, p.N, dicke_cut_for(*d, p.N, a2));
  return dicke_to_product(dicke_cat(p.alpha, p.parity, p.N, p.N));
}

Ket dark_state_recursion(cplx alpha, Parity parity, int n_max) {
  if (n_max < 2) fail(ErrorCode::InvalidTruncation, "dark_state_recursion needs n_max >= 2");
  SpaceDescriptor sp({Factor::fock(n_max)});
  DenseVector v = DenseVector::Zero(n_max + 1);
  const int k = parity == Parity::Even ? 0 : 1;
  const cplx a2 = alpha * alpha;
  v[k] = 1.0;
  for (int m = k; m + 2 <= n_max; m += 2)
    v[m + 2] = a2 * v[m] / std::sqrt(double(m + 1) * double(m + 2));
  Ket out(sp, std::move(v));
  return out.normalize();
}

ManifoldCoeffs manifold_coeffs(cplx alpha, cplx alpha0) {
  const double a2 = std::norm(alpha), b2 = std::norm(alpha0);
  if (!(a2 > 0.0)) fail(ErrorCode::Domain, "manifold_coeffs needs |alpha| > 0");
  ManifoldCoeffs c;
  c.c_pp = 0.5 * (1.0 + std::exp(-2.0 * b2));
  c.c_mm = 0.5 * (1.0 - std::exp(-2.0 * b2));  // = 1 - c_pp without cancellation
  if (b2 == 0.0) return c;

  const cplx al2 = alpha * alpha, a02 = alpha0 * alpha0;
  // log of e^{-|a0|^2} / sqrt(2 sinh 2|a|^2); folded into the integrand so the
  // exponentially large Bessel values never materialize.
  const double log_pref = -b2 - 0.5 * (2.0 * a2 + std::log1p(-std::exp(-4.0 * a2)));
  auto f = [&](double phi) {
    const double z = std::abs(al2 - a02 * std::polar(1.0, 2.0 * phi));
    return bessel_i0_scaled(z) * std::exp(z + log_pref) * std::polar(1.0, -phi);
  };
  // |alpha^2 - alpha0^2 e^{2i phi}| is stationary where 2 phi = arg(alpha^2 / alpha0^2) mod pi.
  std::vector<double> cuts{0.0};
  const double psi = std::arg(al2) - std::arg(a02);
  for (int k = -4; k <= 4; ++k) {
    const double s = 0.5 * psi + 0.5 * M_PI * k;
    if (s > 1e-12 && s < M_PI - 1e-12) cuts.push_back(s);
  }
  cuts.push_back(M_PI);
  std::sort(cuts.begin(), cuts.end());
  cplx integral = 0.0;
  const double tol = 1e-10 / (std::abs(alpha0) * std::abs(alpha) * double(cuts.size() - 1));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    integral += integrate_gk15(f, cuts[i], cuts[i + 1], tol).value;
  c.c_pm = -std::conj(alpha0) * std::abs(alpha) * integral;
  return c;
}

DensityMatrix manifold_state(cplx alpha, cplx alpha0, const EnsembleRep& rep, int N) {
  const ManifoldCoeffs c = manifold_coeffs(alpha, alpha0);
  const double det = c.c_pp * c.c_mm - std::norm(c.c_pm);
  if (det < -1e-8) {
    std::ostringstream os;
    os << "manifold coefficients are not positive (c_pp c_mm - |c_pm|^2 = " << det << ")";
    fail(ErrorCode::CoefficientConsistency, os.str());
  }
  const Ket p = cat_state({alpha, Parity::Even, rep, N});
  const Ket m = cat_state({alpha, Parity::Odd, rep, N});
  const DenseVector& u = p.amplitudes();
  const DenseVector& w = m.amplitudes();
  DenseMatrix rho = c.c_pp * (u * u.adjoint()) + c.c_mm * (w * w.adjoint()) +
                    c.c_pm * (u * w.adjoint()) + std::conj(c.c_pm) * (w * u.adjoint());
  DensityMatrix out(p.space(), std::move(rho));
  const double lmin = out.min_eigenvalue();
  if (lmin < -1e-8) {
    std::ostringstream os;
    os << "assembled manifold state has eigenvalue " << lmin;
    fail(ErrorCode::CoefficientConsistency, os.str());
  }
  return out;
}

}  // namespace catsim
