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

#include "doctest.h"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "catsim/analysis.hpp"
#include "catsim/catstates.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/error.hpp"
#include "catsim/special.hpp"
#include "oracles.hpp"

using namespace catsim;

namespace {

const cplx I(0.0, 1.0);

}  // namespace

TEST_CASE("coherent states") {
  const Ket vac = coherent_state(0.0, 10);
  CHECK(std::abs(vac[0] - 1.0) < 1e-15);
  const cplx alpha(1.5, -1.2);
  const double a2 = std::norm(alpha);
  const Ket k = coherent_state(alpha, 40);
  CHECK(std::abs(k.norm() - 1.0) < 1e-14);
  CHECK(k.expectation(fock_number(40)).real() == doctest::Approx(a2).epsilon(1e-6));
  CHECK(std::abs(k.expectation(fock_destroy(40)) - alpha) < 1e-6 * std::abs(alpha));
  CHECK((k.amplitudes() - oracle::coherent(alpha, 40)).norm() < 1e-12);
  CHECK_THROWS_AS(coherent_state(3.0, 10), Error);
}

TEST_CASE("spin coherent states") {
  CHECK(std::abs(spin_coherent(10, 0.0, 0.3, 10)[0] - 1.0) < 1e-15);
  for (double th : {0.3, 1.0, 2.5}) {
    const Ket k = spin_coherent(12, th, 0.7, 12);
    CHECK(k.expectation(dicke_sz(12, 12)).real() == doctest::Approx(-6.0 * std::cos(th)).epsilon(1e-12));
  }
  const int N = 100;
  double th, ph;
  spin_angles(N, cplx(0.0, 1.0), th, ph);
  CHECK(std::sqrt(double(N)) * std::tan(0.5 * th) == doctest::Approx(1.0));
  const Ket s = spin_coherent(N, th, ph, 20);
  const DenseVector c = oracle::coherent(cplx(0.0, 1.0), 20);
  CHECK(std::abs(c.dot(s.amplitudes())) > 0.99);

  // low-excitation Poisson form
  const double tau = std::tan(0.5 * th);
  DenseVector poisson(21);
  for (int n = 0; n <= 20; ++n)
    poisson[n] = std::polar(std::pow(std::sqrt(double(N)) * tau, n) / std::sqrt(std::tgamma(n + 1.0)),
                            n * ph);
  poisson.normalize();
  CHECK(std::abs(poisson.dot(s.amplitudes())) > 0.99);

  // phi -> phi + pi flips odd amplitudes
  const Ket f = spin_coherent(N, th, ph + M_PI, 20);
  for (int n = 0; n <= 20; ++n)
    CHECK(std::abs(f[n] - (n % 2 ? -1.0 : 1.0) * s[n]) < 1e-12);
  CHECK_THROWS_AS(spin_coherent(10, M_PI, 0.0, 10), Error);
}

TEST_CASE("cat states") {
  CHECK(cat_normalization(1.0, Parity::Even) == doctest::Approx(0.6636).epsilon(1e-4));
  CHECK(cat_normalization(1.0, Parity::Even) == doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0)))));
  const Ket e0 = cat_state({0.0, Parity::Even, BosonicRep{10}});
  const Ket o0 = cat_state({0.0, Parity::Odd, BosonicRep{10}});
  CHECK(std::abs(e0[0] - 1.0) < 1e-15);
  CHECK(std::abs(o0[1] - 1.0) < 1e-15);
  const Ket small = cat_state({1e-4, Parity::Odd, BosonicRep{10}});
  CHECK(std::abs(std::abs(small[1]) - 1.0) < 1e-7);

  const cplx alpha(0.0, 1.0);
  const Ket cp = cat_state({alpha, Parity::Even, BosonicRep{30}});
  const Ket cm = cat_state({alpha, Parity::Odd, BosonicRep{30}});
  // amplitude check against A+ (|a> + |-a>)
  const DenseVector ref = cat_normalization(1.0, Parity::Even) *
                          (oracle::coherent(alpha, 30) + oracle::coherent(-alpha, 30));
  CHECK((cp.amplitudes() - ref).norm() < 1e-10);
  CHECK(std::abs(cp.inner(cm)) == 0.0);
  CHECK(parity_expectation(cp) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(parity_expectation(cm) == doctest::Approx(-1.0).epsilon(1e-14));

  for (const EnsembleRep& rep : {EnsembleRep(DickeRep{}), EnsembleRep(ProductRep{})}) {
    const int N = std::holds_alternative<ProductRep>(rep) ? 10 : 100;
    const Ket de = cat_state({alpha, Parity::Even, rep, N});
    const Ket dm = cat_state({alpha, Parity::Odd, rep, N});
    CHECK(std::abs(de.norm() - 1.0) < 1e-12);
    CHECK(std::abs(de.inner(dm)) < 1e-14);
    CHECK(parity_expectation(de) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(parity_expectation(dm) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cat_state({cplx(0.0, 2.0), Parity::Even, DickeRep{}, 10}), Error);
}

TEST_CASE("dark-state recursion reproduces the cat") {
  for (double a2 : {0.5, 1.0, 2.0, 4.0}) {
    const cplx alpha = I * std::sqrt(a2);
    for (Parity par : {Parity::Even, Parity::Odd}) {
      const Ket d = dark_state_recursion(alpha, par, 40);
      const Ket c = cat_state({alpha, par, BosonicRep{40}});
      // fix the global phase before comparing
      const cplx ph = d.inner(c) / std::abs(d.inner(c));
      CHECK((d.amplitudes() * ph - c.amplitudes()).norm() < 1e-10);
      const LinOp b = fock_destroy(40);
      DenseVector r = (b * b) * d.amplitudes() - alpha * alpha * d.amplitudes();
      // drop the truncation edge, where b^2 cuts the ladder
      r.tail(2).setZero();
      CHECK(r.norm() < 1e-9);
    }
  }
  const Ket odd0 = dark_state_recursion(0.0, Parity::Odd, 5);
  CHECK(std::abs(odd0[1] - 1.0) < 1e-15);
  CHECK_THROWS_AS(dark_state_recursion(1.0, Parity::Even, 1), Error);
}

TEST_CASE("Bessel function") {
  for (double x : {0.0, 0.1, 1.0, 5.0, 14.9, 15.1, 30.0, 80.0, 300.0}) {
    const double ref = boost::math::cyl_bessel_i(0, x);
    CHECK(bessel_i0(x) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(bessel_i0_scaled(x) == doctest::Approx(ref * std::exp(-x)).epsilon(1e-13));
  }
}

TEST_CASE("manifold coefficients") {
  const ManifoldCoeffs z = manifold_coeffs(cplx(0.0, 1.0), 0.0);
  CHECK(z.c_pp == 1.0);
  CHECK(z.c_mm == 0.0);
  CHECK(z.c_pm == 0.0);
  const ManifoldCoeffs one = manifold_coeffs(cplx(0.0, 1.5), cplx(0.6, 0.8));
  CHECK(one.c_pp == doctest::Approx(0.5677).epsilon(1e-4));
  CHECK(one.c_pp + one.c_mm == doctest::Approx(1.0).epsilon(1e-12));
  const ManifoldCoeffs big = manifold_coeffs(cplx(0.0, 1.0), 5.0);
  CHECK(std::abs(big.c_pp - 0.5) < 1e-10);
  CHECK(std::abs(big.c_mm - 0.5) < 1e-10);
  CHECK_THROWS_AS(manifold_coeffs(0.0, 1.0), Error);

  // independent evaluation of the Bessel integral
  for (auto [alpha, a0] : {std::pair<cplx, cplx>{cplx(0.0, 1.0), cplx(0.5, 0.2)},
                           {cplx(0.0, 2.0), cplx(1.0, 0.0)},
                           {cplx(1.0, 1.0), cplx(-0.3, 0.9)}}) {
    const double a2 = std::norm(alpha), b2 = std::norm(a0);
    auto f = [&](double phi) {
      const double z = std::abs(alpha * alpha - a0 * a0 * std::exp(2.0 * I * phi));
      return boost::math::cyl_bessel_i(0, z) * std::exp(-I * phi);
    };
    const cplx integral = oracle::simpson(f, 0.0, M_PI, 4000);
    const cplx ref = -std::conj(a0) * std::abs(alpha) * std::exp(-b2) /
                     std::sqrt(2.0 * std::sinh(2.0 * a2)) * integral;
    const ManifoldCoeffs c = manifold_coeffs(alpha, a0);
    CHECK(std::abs(c.c_pm - ref) < 1e-9);
  }
}

TEST_CASE("manifold state is stationary") {
  for (double a2 : {1.0, 2.0, 4.0}) {
    const RateSet r = effective_rates(1.0, a2, 0.0);
    const ModelSpec m = build_effective_model(r, 1, BosonicRep{40}, false);
    for (cplx a0 : {cplx(0.0, 0.0), cplx(0.7, 0.2), cplx(-1.0, 1.3)}) {
      const DensityMatrix rho = manifold_state(r.alpha, a0, BosonicRep{40});
      CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
      CHECK(rho.min_eigenvalue() > -1e-10);
      CHECK(lindblad_rhs(m, rho.entries()).norm() < 1e-6 * r.kappa_2at);
    }
  }
  const DensityMatrix vac = manifold_state(cplx(0.0, 1.0), 0.0, BosonicRep{30});
  const Ket cp = cat_state({cplx(0.0, 1.0), Parity::Even, BosonicRep{30}});
  CHECK(fidelity(vac, cp) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Dicke steady state lands on the manifold") {
  const int N = 100;
  const RateSet r = effective_rates(1.0, 1.0, 0.0);
  const ModelSpec m = build_effective_model(r, N, DickeRep{}, false);
  const int ncut = int(m.space.total_dim()) - 1;
  const cplx a0(1.0, 0.0);
  double th, ph;
  spin_angles(N, a0, th, ph);
  const Ket start = spin_coherent(N, th, ph, ncut);
  const DensityMatrix ss = steady_state(m, DensityMatrix::from_ket(start), 1e-7);
  const DensityMatrix target = manifold_state(r.alpha, a0, DickeRep{ncut}, N);
  const double f = fidelity(ss, target);
  MESSAGE("fidelity " << f);
  CHECK(f > 0.995);
}
