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

#include <cmath>

#include "catsim/error.hpp"
#include "catsim/hilbert.hpp"
#include "oracles.hpp"

using namespace catsim;

namespace {

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("fock ladder") {
  const LinOp a = fock_destroy(3);
  const SpaceDescriptor& sp = a.space();
  CHECK(sp.total_dim() == 4);
  CHECK((a * Ket::basis(sp, 0).amplitudes()).norm() == 0.0);
  const DenseVector v = a * Ket::basis(sp, 2).amplitudes();
  CHECK(v[1].real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(v[0]) + std::abs(v[2]) + std::abs(v[3]) == 0.0);

  DenseMatrix comm = commutator(a, a.adjoint()).dense();
  DenseMatrix expected = DenseMatrix::Identity(4, 4);
  expected(3, 3) = -3.0;
  CHECK(max_abs(comm - expected) < 1e-14);

  CHECK_THROWS_AS(fock_destroy(0), Error);
  try {
    fock_destroy(0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidTruncation);
  }
}

TEST_CASE("dicke ladder") {
  const LinOp s = dicke_lowering(100, 5);
  const DenseVector v = s * Ket::basis(s.space(), 1).amplitudes();
  CHECK(v[0].real() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK((s * Ket::basis(s.space(), 0).amplitudes()).norm() == 0.0);

  const LinOp sm = dicke_lowering(4, 4), sz = dicke_sz(4, 4);
  const LinOp sp = sm.adjoint();
  CHECK(max_abs(commutator(sp, sm).dense() - 2.0 * sz.dense()) < 1e-13);
  CHECK(max_abs(commutator(sz, sp).dense() - sp.dense()) < 1e-13);
  CHECK(max_abs(commutator(sz, sm).dense() + sm.dense()) < 1e-13);
  CHECK(max_abs(sm.dense() - oracle::dicke_lowering(4, 4)) < 1e-15);

  // With a cutoff only the boundary row of [S+, S-] deviates.
  const LinOp tm = dicke_lowering(10, 4), tz = dicke_sz(10, 4);
  DenseMatrix diff = commutator(tm.adjoint(), tm).dense() - 2.0 * tz.dense();
  CHECK(max_abs(diff.topLeftCorner(4, 4)) < 1e-13);
  CHECK(std::abs(diff(4, 4)) > 1.0);

  CHECK_THROWS_AS(dicke_lowering(3, 4), Error);
}

TEST_CASE("dicke sz") {
  const LinOp sz = dicke_sz(10, 10);
  CHECK(sz.element(0, 0).real() == -5.0);
  CHECK(sz.element(5, 5).real() == 0.0);
  CHECK(std::abs(sz.dense().trace()) < 1e-14);
}

TEST_CASE("adjoint consistency of ladder operators") {
  for (const LinOp& l : {fock_destroy(6), dicke_lowering(9, 7), product_spin_ops(3).s_minus}) {
    const LinOp ld = l.adjoint();
    for (Index m = 0; m < l.dim(); ++m)
      for (Index n = 0; n < l.dim(); ++n)
        CHECK(std::abs(l.element(m, n) - std::conj(ld.element(n, m))) == 0.0);
  }
}

TEST_CASE("product spin operators") {
  const ProductSpinOps two = product_spin_ops(2);
  const DenseVector v = two.sigma_z[0] * Ket::basis(two.s_z.space(), 0).amplitudes();
  CHECK(v[0].real() == -1.0);
  CHECK(max_abs(commutator(two.s_plus, two.s_minus).dense() - 2.0 * two.s_z.dense()) < 1e-14);
  CHECK(max_abs((two.sigma_z[0] + two.sigma_z[1]).dense() - 2.0 * two.s_z.dense()) < 1e-14);

  // Restricted to the symmetric subspace the collective operator is the
  // Dicke ladder.
  for (int N : {3, 6}) {
    const ProductSpinOps ops = product_spin_ops(N);
    const DenseMatrix iso = DenseMatrix(symmetric_isometry(N, N));
    CHECK(max_abs(iso.adjoint() * iso - DenseMatrix::Identity(N + 1, N + 1)) < 1e-12);
    const DenseMatrix restricted = iso.adjoint() * ops.s_minus.dense() * iso;
    CHECK(max_abs(restricted - oracle::dicke_lowering(N, N)) < 1e-12);
    const DenseMatrix rz = iso.adjoint() * ops.s_z.dense() * iso;
    CHECK(max_abs(rz - dicke_sz(N, N).dense()) < 1e-12);
  }
  CHECK_THROWS_AS(product_spin_ops(15), Error);
  CHECK_THROWS_AS(product_spin_ops(0), Error);
}

TEST_CASE("embedding") {
  SpaceDescriptor sp({Factor::fock(1), Factor::fock(1), Factor::dicke(4, 2)});
  CHECK(sp.total_dim() == 12);
  const LinOp id = embed(LinOp::identity(SpaceDescriptor({Factor::fock(1)})), sp, 1);
  CHECK(max_abs(id.dense() - DenseMatrix::Identity(12, 12)) == 0.0);

  const LinOp ap = embed(fock_destroy(1), sp, 0);
  const LinOp sm = embed(dicke_lowering(4, 2), sp, 2);
  const LinOp as = embed(fock_destroy(1), sp, 1);
  CHECK(max_abs(commutator(ap, as).dense()) == 0.0);

  const DenseMatrix ref = oracle::kron(oracle::kron(oracle::lowering(1), oracle::eye(2)),
                                       oracle::dicke_lowering(4, 2));
  CHECK(max_abs((ap * sm).dense() - ref) < 1e-14);
  const DenseVector out = (ap * sm) * Ket::basis(sp, {1, 0, 1}).amplitudes();
  CHECK(out[sp.compose({0, 0, 0})].real() == doctest::Approx(2.0));

  // nnz(embedded) = nnz(op) x product of other dims
  CHECK(sm.nnz() == dicke_lowering(4, 2).nnz() * 4);
  CHECK(ap.nnz() == fock_destroy(1).nnz() * 6);
  CHECK_THROWS_AS(embed(fock_destroy(2), sp, 0), Error);
}

TEST_CASE("composite indexing is row-major") {
  SpaceDescriptor sp({Factor::fock(2), Factor::fock(1), Factor::dicke(5, 3)});
  CHECK(sp.compose({1, 0, 2}) == 1 * 8 + 0 * 4 + 2);
  for (Index i = 0; i < sp.total_dim(); ++i) CHECK(sp.compose(sp.decompose(i)) == i);
  CHECK(sp.total_excitation(sp.compose({2, 1, 3})) == 6);
}

TEST_CASE("state containers") {
  SpaceDescriptor sp({Factor::fock(3)});
  Ket k(sp, DenseVector::Constant(4, cplx(1.0, 1.0)));
  k.normalize();
  CHECK(std::abs(k.norm() - 1.0) < 1e-10);
  DensityMatrix rho = DensityMatrix::from_ket(k);
  CHECK_NOTHROW(rho.validate());
  DenseMatrix bad = rho.entries();
  bad(0, 0) += 0.5;
  CHECK_THROWS_AS(DensityMatrix(sp, bad).validate(), Error);
  DenseMatrix neg = DenseMatrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(sp, neg).validate(), Error);
}

TEST_CASE("partial trace") {
  SpaceDescriptor sp({Factor::fock(1), Factor::fock(2)});
  DenseVector a(2), b(3);
  a << 0.6, 0.8;
  b << cplx(0.0, 1.0), 0.0, 0.0;
  DenseVector ab(6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) ab[3 * i + j] = a[i] * b[j];
  Ket k(sp, ab);
  const DensityMatrix red = partial_trace(DensityMatrix::from_ket(k), 0);
  CHECK(std::abs(red.entries()(0, 0) - 0.36) < 1e-15);
  CHECK(std::abs(red.entries()(0, 1) - 0.48) < 1e-15);
  const DensityMatrix red2 = partial_trace(DensityMatrix::from_ket(k), 1);
  CHECK(std::abs(red2.entries()(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("space guards") {
  CHECK_THROWS_AS(Factor::dicke(5, 6), Error);
  CHECK_THROWS_AS(Factor::spin_half_product(kMaxProductSpins + 1), Error);
  CHECK(Factor::spin_half_product(kMaxProductSpins).dim() == (Index{1} << kMaxProductSpins));
  CHECK_THROWS_AS(LinOp(SpaceDescriptor({Factor::fock(2)}), SparseMatrix(4, 4)), Error);
}
