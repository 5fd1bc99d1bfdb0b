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

#include "catsim/hilbert.hpp"
#include "catsim/models.hpp"

namespace catsim {

enum class Parity { Even, Odd };

struct CatParams {
  cplx alpha = 0.0;
  Parity parity = Parity::Even;
  EnsembleRep rep = BosonicRep{40};
  int N = 0;  // atom count, Dicke and product reps only
};

struct ManifoldCoeffs {
  double c_pp = 1.0;
  double c_mm = 0.0;
  cplx c_pm = 0.0;
};

// Truncated coherent state, renormalized. Requires |alpha|^2 <= n_max / 2.
Ket coherent_state(cplx alpha, int n_max);

// Exact rotation of the collective ground state, restricted to n <= n_cut and
// renormalized: c_n = sqrt(C(N,n)) cos^{N-n}(theta/2) sin^n(theta/2) e^{i n phi}.
Ket spin_coherent(int N, double theta, double phi, int n_cut);
// Bloch angles whose low-excitation limit is the coherent amplitude alpha.
void spin_angles(int N, cplx alpha, double& theta, double& phi);

Ket cat_state(const CatParams& p);
double cat_normalization(double alpha_sq, Parity parity);

// Dark state of (b^2 - alpha^2): c_{m+2} = alpha^2 c_m / sqrt((m+1)(m+2)),
// seeded with the parity's lowest level.
Ket dark_state_recursion(cplx alpha, Parity parity, int n_max);

ManifoldCoeffs manifold_coeffs(cplx alpha, cplx alpha0);
// c_pp |C+><C+| + c_mm |C-><C-| + c_pm |C+><C-| + h.c.
DensityMatrix manifold_state(cplx alpha, cplx alpha0, const EnsembleRep& rep, int N = 0);

}  // namespace catsim
