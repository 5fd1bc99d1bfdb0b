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

#include "catsim/hilbert.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "catsim/error.hpp"

namespace catsim {

using Triplet = Eigen::Triplet<cplx>;

Factor Factor::fock(int n_max) {
  if (n_max < 1)
    fail(ErrorCode::InvalidTruncation,
         "Fock truncation n_max must be >= 1, got " + std::to_string(n_max));
  return Factor(Fock{n_max}, n_max + 1);
}

Factor Factor::dicke(int atoms, int n_cut) {
  if (atoms < 1)
    fail(ErrorCode::InvalidCutoff, "Dicke factor needs at least one atom");
  if (n_cut < 1 || n_cut > atoms)
    fail(ErrorCode::InvalidCutoff, "Dicke cutoff must satisfy 1 <= n_cut <= N (n_cut=" +
                                       std::to_string(n_cut) + ", N=" +
                                       std::to_string(atoms) + ")");
  return Factor(Dicke{atoms, n_cut}, n_cut + 1);
}

Factor Factor::spin_half_product(int spins) {
  if (spins < 1 || spins > kMaxProductSpins)
    fail(ErrorCode::MemoryGuard, "spin product space supports 1..." +
                                     std::to_string(kMaxProductSpins) +
                                     " spins, got " + std::to_string(spins));
  return Factor(SpinHalfProduct{spins}, Index{1} << spins);
}

int Factor::excitation(Index i) const {
  if (std::holds_alternative<SpinHalfProduct>(kind_))
    return std::popcount(static_cast<unsigned long long>(i));
  return static_cast<int>(i);
}

Index Factor::truncation_level() const {
  if (const auto* f = std::get_if<Fock>(&kind_)) return f->n_max;
  if (const auto* d = std::get_if<Dicke>(&kind_))
    return d->n_cut < d->atoms ? d->n_cut : -1;
  return -1;
}

std::string Factor::describe() const {
  std::ostringstream os;
  if (const auto* f = std::get_if<Fock>(&kind_))
    os << "Fock(n_max=" << f->n_max << ")";
  else if (const auto* d = std::get_if<Dicke>(&kind_))
    os << "Dicke(N=" << d->atoms << ",n_cut=" << d->n_cut << ")";
  else
    os << "SpinHalfProduct(N=" << std::get<SpinHalfProduct>(kind_).spins << ")";
  return os.str();
}

SpaceDescriptor::SpaceDescriptor(std::vector<Factor> factors)
    : factors_(std::move(factors)), total_dim_(1) {
  if (factors_.empty()) fail(ErrorCode::Assembly, "space needs at least one factor");
  for (const auto& f : factors_) total_dim_ *= f.dim();
}

const Factor& SpaceDescriptor::factor(std::size_t slot) const {
  if (slot >= factors_.size())
    fail(ErrorCode::Embedding, "slot " + std::to_string(slot) + " out of range for " +
                                   describe());
  return factors_[slot];
}

Index SpaceDescriptor::compose(std::span<const Index> digits) const {
  if (digits.size() != factors_.size())
    fail(ErrorCode::DimensionMismatch, "basis label has wrong number of digits");
  Index idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= factors_[k].dim())
      fail(ErrorCode::DimensionMismatch, "basis digit out of range for " +
                                             factors_[k].describe());
    idx = idx * factors_[k].dim() + digits[k];
  }
  return idx;
}

Index SpaceDescriptor::compose(std::initializer_list<Index> digits) const {
  return compose(std::span<const Index>(digits.begin(), digits.size()));
}

std::vector<Index> SpaceDescriptor::decompose(Index index) const {
  std::vector<Index> digits(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    digits[k] = index % factors_[k].dim();
    index /= factors_[k].dim();
  }
  return digits;
}

int SpaceDescriptor::total_excitation(Index index) const {
  int n = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    n += factors_[k].excitation(index % factors_[k].dim());
    index /= factors_[k].dim();
  }
  return n;
}

std::string SpaceDescriptor::describe() const {
  std::string s;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (k) s += " x ";
    s += factors_[k].describe();
  }
  return s;
}

// ---------------------------------------------------------------------------

LinOp::LinOp(SpaceDescriptor space, SparseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.total_dim() || matrix_.cols() != space_.total_dim())
    fail(ErrorCode::DimensionMismatch,
         "operator of size " + std::to_string(matrix_.rows()) + "x" +
             std::to_string(matrix_.cols()) + " does not fit " + space_.describe());
  matrix_.makeCompressed();
}

LinOp LinOp::identity(const SpaceDescriptor& space) {
  SparseMatrix m(space.total_dim(), space.total_dim());
  m.setIdentity();
  return LinOp(space, std::move(m));
}

LinOp LinOp::zero(const SpaceDescriptor& space) {
  return LinOp(space, SparseMatrix(space.total_dim(), space.total_dim()));
}

LinOp LinOp::diagonal(const SpaceDescriptor& space, const Eigen::VectorXd& d) {
  if (d.size() != space.total_dim())
    fail(ErrorCode::DimensionMismatch, "diagonal has wrong length");
  std::vector<Triplet> t;
  for (Index i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) t.emplace_back(i, i, d[i]);
  SparseMatrix m(d.size(), d.size());
  m.setFromTriplets(t.begin(), t.end());
  return LinOp(space, std::move(m));
}

LinOp LinOp::adjoint() const { return LinOp(space_, SparseMatrix(matrix_.adjoint())); }

double LinOp::hermiticity_defect() const {
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

bool LinOp::is_hermitian(double tol) const { return hermiticity_defect() < tol; }

void LinOp::require_hermitian(const std::string& what, double tol) const {
  const double d = hermiticity_defect();
  if (!(d < tol)) {
    std::ostringstream os;
    os << what << " is not Hermitian (max |A - A^dag| = " << d << ")";
    fail(ErrorCode::Assembly, os.str());
  }
}

void LinOp::check_same_space(const LinOp& other, const char* op) const {
  if (!(space_ == other.space_))
    fail(ErrorCode::DimensionMismatch, std::string("operator ") + op + " across spaces " +
                                           space_.describe() + " and " +
                                           other.space_.describe());
}

LinOp LinOp::operator*(const LinOp& other) const {
  check_same_space(other, "*");
  return LinOp(space_, SparseMatrix((matrix_ * other.matrix_).pruned()));
}

LinOp LinOp::operator+(const LinOp& other) const {
  check_same_space(other, "+");
  return LinOp(space_, SparseMatrix(matrix_ + other.matrix_));
}

LinOp LinOp::operator-(const LinOp& other) const {
  check_same_space(other, "-");
  return LinOp(space_, SparseMatrix(matrix_ - other.matrix_));
}

LinOp LinOp::operator*(cplx s) const { return LinOp(space_, SparseMatrix(matrix_ * s)); }

LinOp& LinOp::operator+=(const LinOp& other) {
  check_same_space(other, "+=");
  matrix_ += other.matrix_;
  matrix_.makeCompressed();
  return *this;
}

LinOp commutator(const LinOp& a, const LinOp& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

Ket::Ket(SpaceDescriptor space, DenseVector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.total_dim())
    fail(ErrorCode::DimensionMismatch, "ket length does not match " + space_.describe());
}

Ket Ket::basis(const SpaceDescriptor& space, Index index) {
  if (index < 0 || index >= space.total_dim())
    fail(ErrorCode::DimensionMismatch, "basis index out of range");
  DenseVector v = DenseVector::Zero(space.total_dim());
  v[index] = 1.0;
  return Ket(space, std::move(v));
}

Ket Ket::basis(const SpaceDescriptor& space, std::initializer_list<Index> digits) {
  return basis(space, space.compose(digits));
}

Ket& Ket::normalize() {
  const double n = amps_.norm();
  if (!(n > 0.0)) fail(ErrorCode::InvalidState, "cannot normalize a zero ket");
  amps_ /= n;
  return *this;
}

Ket Ket::normalized() const {
  Ket k = *this;
  k.normalize();
  return k;
}

cplx Ket::inner(const Ket& other) const {
  if (!(space_ == other.space_))
    fail(ErrorCode::DimensionMismatch, "inner product across different spaces");
  return amps_.dot(other.amps_);
}

cplx Ket::expectation(const LinOp& op) const {
  if (!(space_ == op.space()))
    fail(ErrorCode::DimensionMismatch, "expectation across different spaces");
  return amps_.dot(op.matrix() * amps_);
}

DensityMatrix::DensityMatrix(SpaceDescriptor space, DenseMatrix entries)
    : space_(std::move(space)), rho_(std::move(entries)) {
  if (rho_.rows() != space_.total_dim() || rho_.cols() != space_.total_dim())
    fail(ErrorCode::DimensionMismatch,
         "density matrix shape does not match " + space_.describe());
}

DensityMatrix DensityMatrix::from_ket(const Ket& ket) {
  const DenseVector& v = ket.amplitudes();
  return DensityMatrix(ket.space(), v * v.adjoint());
}

DensityMatrix DensityMatrix::basis(const SpaceDescriptor& space, Index index) {
  return from_ket(Ket::basis(space, index));
}

double DensityMatrix::hermiticity_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const DenseMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

cplx DensityMatrix::expectation(const LinOp& op) const {
  if (!(space_ == op.space()))
    fail(ErrorCode::DimensionMismatch, "expectation across different spaces");
  // Tr(A rho) = sum_ij A_ij rho_ji
  cplx acc = 0.0;
  const SparseMatrix& a = op.matrix();
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      acc += it.value() * rho_(it.col(), it.row());
  return acc;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  std::ostringstream os;
  const double herm = hermiticity_defect();
  if (!(herm < herm_tol)) {
    os << "density matrix not Hermitian (defect " << herm << ")";
    fail(ErrorCode::InvalidState, os.str());
  }
  const cplx tr = trace();
  if (!(std::abs(tr - 1.0) < trace_tol)) {
    os << "density matrix trace " << tr.real() << " deviates from 1";
    fail(ErrorCode::InvalidState, os.str());
  }
  const double lmin = min_eigenvalue();
  if (!(lmin >= -eig_tol)) {
    os << "density matrix has negative eigenvalue " << lmin;
    fail(ErrorCode::InvalidState, os.str());
  }
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep_slot) {
  const SpaceDescriptor& sp = rho.space();
  const Index dk = sp.factor(keep_slot).dim();
  Index outer = 1, inner = 1;
  for (std::size_t k = 0; k < keep_slot; ++k) outer *= sp.factor(k).dim();
  for (std::size_t k = keep_slot + 1; k < sp.size(); ++k) inner *= sp.factor(k).dim();
  DenseMatrix red = DenseMatrix::Zero(dk, dk);
  const DenseMatrix& r = rho.entries();
  for (Index o = 0; o < outer; ++o)
    for (Index i = 0; i < inner; ++i)
      for (Index a = 0; a < dk; ++a)
        for (Index b = 0; b < dk; ++b)
          red(a, b) += r((o * dk + a) * inner + i, (o * dk + b) * inner + i);
  return DensityMatrix(SpaceDescriptor({sp.factor(keep_slot)}), std::move(red));
}

// ---------------------------------------------------------------------------

LinOp fock_destroy(int n_max) {
  SpaceDescriptor sp({Factor::fock(n_max)});
  std::vector<Triplet> t;
  for (int n = 1; n <= n_max; ++n) t.emplace_back(n - 1, n, std::sqrt(double(n)));
  SparseMatrix m(n_max + 1, n_max + 1);
  m.setFromTriplets(t.begin(), t.end());
  return LinOp(sp, std::move(m));
}

LinOp fock_number(int n_max) {
  SpaceDescriptor sp({Factor::fock(n_max)});
  return LinOp::diagonal(sp, Eigen::VectorXd::LinSpaced(n_max + 1, 0.0, n_max));
}

LinOp dicke_lowering(int atoms, int n_cut) {
  SpaceDescriptor sp({Factor::dicke(atoms, n_cut)});
  std::vector<Triplet> t;
  for (int n = 1; n <= n_cut; ++n)
    t.emplace_back(n - 1, n, std::sqrt(double(n) * double(atoms - n + 1)));
  SparseMatrix m(n_cut + 1, n_cut + 1);
  m.setFromTriplets(t.begin(), t.end());
  return LinOp(sp, std::move(m));
}

LinOp dicke_raising(int atoms, int n_cut) { return dicke_lowering(atoms, n_cut).adjoint(); }

LinOp dicke_sz(int atoms, int n_cut) {
  SpaceDescriptor sp({Factor::dicke(atoms, n_cut)});
  Eigen::VectorXd d(n_cut + 1);
  for (int n = 0; n <= n_cut; ++n) d[n] = -0.5 * atoms + n;
  return LinOp::diagonal(sp, d);
}

ProductSpinOps product_spin_ops(int spins) {
  SpaceDescriptor sp({Factor::spin_half_product(spins)});
  const Index dim = sp.total_dim();
  ProductSpinOps ops;
  std::vector<Triplet> tm_all, tz_all;
  for (int j = 0; j < spins; ++j) {
    const Index bit = Index{1} << (spins - 1 - j);
    std::vector<Triplet> tz, tm;
    for (Index s = 0; s < dim; ++s) {
      const bool up = (s & bit) != 0;
      tz.emplace_back(s, s, up ? 1.0 : -1.0);
      if (up) tm.emplace_back(s ^ bit, s, 1.0);
    }
    SparseMatrix z(dim, dim), m(dim, dim);
    z.setFromTriplets(tz.begin(), tz.end());
    m.setFromTriplets(tm.begin(), tm.end());
    ops.sigma_z.emplace_back(sp, std::move(z));
    ops.sigma_minus.emplace_back(sp, std::move(m));
  }
  Eigen::VectorXd sz(dim);
  for (Index s = 0; s < dim; ++s)
    sz[s] = std::popcount(static_cast<unsigned long long>(s)) - 0.5 * spins;
  ops.s_z = LinOp::diagonal(sp, sz);
  ops.s_minus = LinOp::zero(sp);
  for (const auto& m : ops.sigma_minus) ops.s_minus += m;
  ops.s_plus = ops.s_minus.adjoint();
  return ops;
}

SparseMatrix symmetric_isometry(int spins, int n_cut) {
  (void)Factor::spin_half_product(spins);
  (void)Factor::dicke(spins, n_cut);
  const Index dim = Index{1} << spins;
  std::vector<Triplet> t;
  for (Index s = 0; s < dim; ++s) {
    const int n = std::popcount(static_cast<unsigned long long>(s));
    if (n > n_cut) continue;
    // 1/sqrt(C(N, n)) via lgamma keeps this exact enough for N <= 14.
    const double c = std::exp(std::lgamma(spins + 1.0) - std::lgamma(n + 1.0) -
                              std::lgamma(spins - n + 1.0));
    t.emplace_back(s, n, 1.0 / std::sqrt(std::round(c)));
  }
  SparseMatrix m(dim, n_cut + 1);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Ket dicke_to_product(const Ket& dicke_ket) {
  const auto& f = dicke_ket.space();
  const auto* d = f.size() == 1 ? std::get_if<Dicke>(&f.factor(0).kind()) : nullptr;
  if (!d) fail(ErrorCode::Representation, "dicke_to_product expects a single Dicke factor");
  SparseMatrix iso = symmetric_isometry(d->atoms, d->n_cut);
  return Ket(SpaceDescriptor({Factor::spin_half_product(d->atoms)}),
             iso * dicke_ket.amplitudes());
}

LinOp embed(const LinOp& op, const SpaceDescriptor& space, std::size_t slot) {
  const Factor& f = space.factor(slot);
  if (op.dim() != f.dim())
    fail(ErrorCode::Embedding, "operator of dim " + std::to_string(op.dim()) +
                                   " cannot sit in slot " + std::to_string(slot) +
                                   " (" + f.describe() + ")");
  Index left = 1, right = 1;
  for (std::size_t k = 0; k < slot; ++k) left *= space.factor(k).dim();
  for (std::size_t k = slot + 1; k < space.size(); ++k) right *= space.factor(k).dim();
  SparseMatrix il(left, left), ir(right, right);
  il.setIdentity();
  ir.setIdentity();
  SparseMatrix tmp = Eigen::kroneckerProduct(op.matrix(), ir);
  SparseMatrix full = Eigen::kroneckerProduct(il, tmp);
  return LinOp(space, std::move(full));
}

}  // namespace catsim
