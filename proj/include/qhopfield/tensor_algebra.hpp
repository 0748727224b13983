// Copyright 2026 The qhopfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Complex linear algebra on the N-qubit Hilbert space.
//
// Conventions used by every module:
//   * Computational basis with qubit 0 as the most significant bit. Bit value
//     0 at a site is spin up (sigma^z = +1), bit value 1 is spin down.
//   * Ladder operators carry the factor 1/2: sigma^+ = (sigma^x + i sigma^y)/2
//     = |up><down|, so its only matrix element is 1. Written without the 1/2,
//     (sigma^x + i sigma^y) would double that element; the rates in the
//     dissipator assume the unit-element form.
//   * Density matrices are vectorized by stacking columns:
//     vec(rho)[a + b * dim] = rho(a, b).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <string_view>
#include <variant>

namespace qhop {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Largest qubit count any state or operator may be built for.
inline constexpr int kMaxQubits = 20;

/// Dimension 2^n of the n-qubit space (validated).
Index hilbert_dim(int num_qubits);

/// Bit mask selecting `site` inside a basis index for `num_qubits` qubits.
inline std::uint64_t site_mask(int site, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - 1 - site);
}

/// sigma^z eigenvalue (+1 or -1) of `site` in basis state `index`.
inline int spin_at(std::uint64_t index, int site, int num_qubits) {
  return (index & site_mask(site, num_qubits)) ? -1 : 1;
}

enum class PauliKind { x, y, z, plus, minus };

PauliKind parse_pauli_kind(std::string_view name);
Eigen::Matrix2cd pauli(PauliKind kind);

/// Complex operator on 2^N dimensional space. Storage is sparse unless the
/// fill fraction exceeds 25%, in which case it switches to dense. Values are
/// immutable after construction; arithmetic returns new operators.
class QuantumOperator {
 public:
  static constexpr double kDenseFillThreshold = 0.25;

  QuantumOperator(int num_qubits, SparseMatrix matrix);
  QuantumOperator(int num_qubits, DenseMatrix matrix);

  static QuantumOperator zero(int num_qubits);
  static QuantumOperator identity(int num_qubits);
  static QuantumOperator diagonal(int num_qubits, const ComplexVector& diag);
  static QuantumOperator diagonal(int num_qubits, const Eigen::VectorXd& diag);

  int num_qubits() const { return num_qubits_; }
  Index dim() const { return dim_; }
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }
  Index nonzeros() const;
  double fill_fraction() const;

  /// Copies out in the requested layout regardless of the stored one.
  DenseMatrix to_dense() const;
  SparseMatrix to_sparse() const;
  /// Same operator with dense storage forced (for agreement checks).
  QuantumOperator densified() const;

  /// Main diagonal. Cheap for sparse storage.
  ComplexVector diagonal() const;
  /// True when every stored off-diagonal entry is below `tol`.
  bool is_diagonal(double tol = 0.0) const;

  QuantumOperator adjoint() const;
  /// max |A - A^dagger|.
  double hermiticity_error() const;

  ComplexVector apply(const ComplexVector& v) const;
  DenseMatrix apply(const DenseMatrix& m) const;

  friend QuantumOperator operator+(const QuantumOperator& a, const QuantumOperator& b);
  friend QuantumOperator operator-(const QuantumOperator& a, const QuantumOperator& b);
  friend QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b);
  friend QuantumOperator operator*(Complex s, const QuantumOperator& a);
  friend QuantumOperator operator*(double s, const QuantumOperator& a);

  /// max |a_ij - b_ij|.
  friend double max_abs_difference(const QuantumOperator& a, const QuantumOperator& b);

 private:
  void check_dims() const;
  void rebalance();

  int num_qubits_;
  Index dim_;
  std::variant<SparseMatrix, DenseMatrix> data_;
};

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b);

/// I (x) ... (x) op (x) ... (x) I with `op` acting on `site`.
QuantumOperator embed(const Eigen::Matrix2cd& op, int site, int num_qubits);

/// Pure state on the 2^N space. Unnormalized amplitudes are allowed while
/// propagating; normalize() restores unit norm.
class PureState {
 public:
  PureState(int num_qubits, ComplexVector amplitudes);
  static PureState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexVector& amplitudes() { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  void normalize();

 private:
  int num_qubits_;
  ComplexVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, DenseMatrix entries);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix basis_projector(int num_qubits, std::uint64_t index);
  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  Index dim() const { return entries_.rows(); }
  const DenseMatrix& entries() const { return entries_; }
  DenseMatrix& entries() { return entries_; }

  Complex trace() const { return entries_.trace(); }
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  double max_off_diagonal() const;

 private:
  int num_qubits_;
  DenseMatrix entries_;
};

/// <psi|op|psi> for a normalized or unnormalized psi (divides by <psi|psi>).
Complex expectation(const QuantumOperator& op, const PureState& psi);
/// Tr(op rho).
Complex expectation(const QuantumOperator& op, const DensityMatrix& rho);

/// Real part of the expectation of a Hermitian operator. Throws
/// NumericalError when the imaginary part exceeds 1e-9.
double hermitian_expectation(const QuantumOperator& op, const PureState& psi);
double hermitian_expectation(const QuantumOperator& op, const DensityMatrix& rho);

ComplexVector vectorize(const DensityMatrix& rho);
DensityMatrix devectorize(const ComplexVector& v);

}  // namespace qhop
