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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace catsim {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

inline constexpr int kMaxProductSpins = 14;

struct Fock {
  int n_max = 1;
  bool operator==(const Fock&) const = default;
};

// Symmetric ladder |n> = |S=N/2, m=-N/2+n>, n = 0..n_cut.
struct Dicke {
  int atoms = 1;
  int n_cut = 1;
  bool operator==(const Dicke&) const = default;
};

// Basis index bit (N-1-j) holds spin j, so spin 0 is the most significant
// bit and the ordering matches a plain Kronecker product. Bit set = excited.
struct SpinHalfProduct {
  int spins = 1;
  bool operator==(const SpinHalfProduct&) const = default;
};

class Factor {
 public:
  using Kind = std::variant<Fock, Dicke, SpinHalfProduct>;

  static Factor fock(int n_max);
  static Factor dicke(int atoms, int n_cut);
  static Factor spin_half_product(int spins);

  const Kind& kind() const { return kind_; }
  Index dim() const { return dim_; }
  // Excitation number carried by local basis index i.
  int excitation(Index i) const;
  // Index of the highest truncated level, or -1 when the factor is not
  // truncated (full Dicke ladder, spin product).
  Index truncation_level() const;
  std::string describe() const;

  bool operator==(const Factor&) const = default;

 private:
  explicit Factor(Kind kind, Index dim) : kind_(kind), dim_(dim) {}
  Kind kind_;
  Index dim_;
};

// Composite index is row-major over factors in declaration order: the last
// factor varies fastest.
class SpaceDescriptor {
 public:
  SpaceDescriptor() = default;
  explicit SpaceDescriptor(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  const Factor& factor(std::size_t slot) const;
  Index total_dim() const { return total_dim_; }

  Index compose(std::span<const Index> digits) const;
  Index compose(std::initializer_list<Index> digits) const;
  std::vector<Index> decompose(Index index) const;
  int total_excitation(Index index) const;

  std::string describe() const;
  bool operator==(const SpaceDescriptor&) const = default;

 private:
  std::vector<Factor> factors_;
  Index total_dim_ = 0;
};

class LinOp {
 public:
  LinOp() = default;
  LinOp(SpaceDescriptor space, SparseMatrix matrix);

  static LinOp identity(const SpaceDescriptor& space);
  static LinOp zero(const SpaceDescriptor& space);
  static LinOp diagonal(const SpaceDescriptor& space, const Eigen::VectorXd& d);

  const SpaceDescriptor& space() const { return space_; }
  const SparseMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  Index nnz() const { return matrix_.nonZeros(); }
  cplx element(Index row, Index col) const { return matrix_.coeff(row, col); }

  LinOp adjoint() const;
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const;
  // Throws unless the operator is Hermitian to tol.
  void require_hermitian(const std::string& what, double tol = 1e-12) const;
  DenseMatrix dense() const { return DenseMatrix(matrix_); }

  LinOp operator*(const LinOp& other) const;
  LinOp operator+(const LinOp& other) const;
  LinOp operator-(const LinOp& other) const;
  LinOp operator*(cplx s) const;
  LinOp& operator+=(const LinOp& other);
  DenseVector operator*(const DenseVector& v) const { return matrix_ * v; }

 private:
  void check_same_space(const LinOp& other, const char* op) const;

  SpaceDescriptor space_;
  SparseMatrix matrix_;
};

inline LinOp operator*(cplx s, const LinOp& op) { return op * s; }
LinOp commutator(const LinOp& a, const LinOp& b);

class Ket {
 public:
  Ket() = default;
  Ket(SpaceDescriptor space, DenseVector amplitudes);

  static Ket basis(const SpaceDescriptor& space, Index index);
  static Ket basis(const SpaceDescriptor& space, std::initializer_list<Index> digits);

  const SpaceDescriptor& space() const { return space_; }
  const DenseVector& amplitudes() const { return amps_; }
  DenseVector& amplitudes() { return amps_; }
  Index dim() const { return amps_.size(); }
  cplx operator[](Index i) const { return amps_[i]; }

  double norm() const { return amps_.norm(); }
  Ket& normalize();
  Ket normalized() const;
  cplx inner(const Ket& other) const;  // <this|other>
  cplx expectation(const LinOp& op) const;

 private:
  SpaceDescriptor space_;
  DenseVector amps_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(SpaceDescriptor space, DenseMatrix entries);

  static DensityMatrix from_ket(const Ket& ket);
  static DensityMatrix basis(const SpaceDescriptor& space, Index index);

  const SpaceDescriptor& space() const { return space_; }
  const DenseMatrix& entries() const { return rho_; }
  DenseMatrix& entries() { return rho_; }
  Index dim() const { return rho_.rows(); }

  cplx trace() const { return rho_.trace(); }
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  cplx expectation(const LinOp& op) const;
  double population(Index index) const { return rho_(index, index).real(); }

  // Hermitian to 1e-10, unit trace to 1e-8, eigenvalues >= -1e-8.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                double eig_tol = 1e-8) const;

 private:
  SpaceDescriptor space_;
  DenseMatrix rho_;
};

// Reduced state on one factor.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep_slot);

LinOp fock_destroy(int n_max);
LinOp fock_number(int n_max);
LinOp dicke_lowering(int atoms, int n_cut);
LinOp dicke_raising(int atoms, int n_cut);
LinOp dicke_sz(int atoms, int n_cut);

struct ProductSpinOps {
  std::vector<LinOp> sigma_z;
  std::vector<LinOp> sigma_minus;
  LinOp s_minus;
  LinOp s_plus;
  LinOp s_z;
};
ProductSpinOps product_spin_ops(int spins);

// Columns are the normalized symmetric states |n>, n = 0..n_cut, written in
// the spin-product basis.
SparseMatrix symmetric_isometry(int spins, int n_cut);
Ket dicke_to_product(const Ket& dicke_ket);

LinOp embed(const LinOp& op, const SpaceDescriptor& space, std::size_t slot);

}  // namespace catsim
