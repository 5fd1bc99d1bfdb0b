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

#include <string>
#include <vector>

#include "catsim/hilbert.hpp"
#include "catsim/models.hpp"

namespace catsim {

// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), not squared.
double fidelity(const DensityMatrix& rho, const DensityMatrix& target);
// Pure target: sqrt(<psi|rho|psi>). check_state runs the positivity check on
// rho (an eigen-decomposition); skip it inside tight loops.
double fidelity(const DensityMatrix& rho, const Ket& target, bool check_state = true);
double fidelity(const Ket& psi, const Ket& target);
double preparation_error(const DensityMatrix& rho, const DensityMatrix& target);
double preparation_error(const DensityMatrix& rho, const Ket& target, bool check_state = true);

inline constexpr const char* kFidelityConvention =
    "fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)) (Uhlmann, not squared); eta = 1 - F";

struct WignerGridSpec {
  double re_min = -3.0, re_max = 3.0;
  double im_min = -3.0, im_max = 3.0;
  int points = 121;
};

WignerGridSpec default_wigner_grid(double alpha_abs);

struct WignerGrid {
  WignerGridSpec spec;
  Eigen::MatrixXd values;  // values(i_im, i_re)
  std::vector<double> re_axis() const;
  std::vector<double> im_axis() const;
  double integral() const;
  double at_origin() const;  // nearest grid point to beta = 0
};

// Matrix elements <m|D(beta)|n>, m, n <= n_max, of the untruncated
// displacement operator.
DenseMatrix displacement_elements(cplx beta, int n_max);

// Displaced-parity evaluation on a single Fock factor.
WignerGrid wigner(const DensityMatrix& rho, const WignerGridSpec& grid, unsigned threads = 0);
// Relabel a single Dicke (or Fock) factor state as a Fock state with the
// same number-basis entries.
DensityMatrix to_bosonic(const DensityMatrix& rho);
void write_wigner(const WignerGrid& w, const std::string& csv_path, const std::string& json_path,
                  const std::string& label, double time);

double parity_expectation(const DensityMatrix& rho);
double parity_expectation(const Ket& psi);

// D <= 200 guard.
SparseMatrix liouvillian_matrix(const ModelSpec& model);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // sorted by |Re| ascending
  int kernel_dim = 0;
  double gap = 0.0;
  double kernel_tol = 0.0;
  bool complete = true;  // false: only eigenvalues near zero were computed
};

inline constexpr Index kDenseSpectrumDim = 40;

// kernel_tol < 0 selects 1e-8 x the largest rate in the model.
SpectrumReport spectral_gap(const ModelSpec& model, double kernel_tol = -1.0, int n_eigs = 24);

struct LegCoherence {
  double coherence = 0.0;  // |R01| / sqrt(R00 R11)
  cplx alpha_eff = 0.0;
};

// Coherence between the two legs |+a>, |-a> (a = sqrt<b^2>) of a bosonic
// state, read from the Gram-corrected projection onto span{|a>, |-a>}.
LegCoherence leg_coherence(const DensityMatrix& rho);

}  // namespace catsim
