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

#include "qhopfield/tensor_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qhopfield/errors.hpp"

namespace qhop {

Index hilbert_dim(int num_qubits) {
  require(num_qubits >= 1 && num_qubits <= kMaxQubits,
          "qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
              std::to_string(num_qubits));
  return Index{1} << num_qubits;
}

PauliKind parse_pauli_kind(std::string_view name) {
  if (name == "x") return PauliKind::x;
  if (name == "y") return PauliKind::y;
  if (name == "z") return PauliKind::z;
  if (name == "plus" || name == "+") return PauliKind::plus;
  if (name == "minus" || name == "-") return PauliKind::minus;
  throw UsageError("unknown Pauli kind '" + std::string(name) +
                   "' (expected x, y, z, plus or minus)");
}

Eigen::Matrix2cd pauli(PauliKind kind) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (kind) {
    case PauliKind::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliKind::y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case PauliKind::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliKind::plus:
      m(0, 1) = 1.0;
      break;
    case PauliKind::minus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

// ---------------------------------------------------------------------------
// QuantumOperator

QuantumOperator::QuantumOperator(int num_qubits, SparseMatrix matrix)
    : num_qubits_(num_qubits), dim_(hilbert_dim(num_qubits)), data_(std::move(matrix)) {
  check_dims();
  std::get<SparseMatrix>(data_).makeCompressed();
  rebalance();
}

QuantumOperator::QuantumOperator(int num_qubits, DenseMatrix matrix)
    : num_qubits_(num_qubits), dim_(hilbert_dim(num_qubits)), data_(std::move(matrix)) {
  check_dims();
  rebalance();
}

void QuantumOperator::check_dims() const {
  const auto [rows, cols] = std::visit(
      [](const auto& m) { return std::pair<Index, Index>{m.rows(), m.cols()}; }, data_);
  require(rows == dim_ && cols == dim_,
          "operator shape " + std::to_string(rows) + "x" + std::to_string(cols) +
              " does not match 2^" + std::to_string(num_qubits_));
}

void QuantumOperator::rebalance() {
  const double fill = fill_fraction();
  if (is_sparse()) {
    if (fill > kDenseFillThreshold) data_ = DenseMatrix(std::get<SparseMatrix>(data_));
  } else if (fill <= kDenseFillThreshold) {
    SparseMatrix s = std::get<DenseMatrix>(data_).sparseView(Complex(0.0), 0.0);
    s.makeCompressed();
    data_ = std::move(s);
  }
}

QuantumOperator QuantumOperator::zero(int num_qubits) {
  const Index d = hilbert_dim(num_qubits);
  return QuantumOperator(num_qubits, SparseMatrix(d, d));
}

QuantumOperator QuantumOperator::identity(int num_qubits) {
  const Index d = hilbert_dim(num_qubits);
  SparseMatrix m(d, d);
  m.setIdentity();
  return QuantumOperator(num_qubits, std::move(m));
}

QuantumOperator QuantumOperator::diagonal(int num_qubits, const ComplexVector& diag) {
  const Index d = hilbert_dim(num_qubits);
  require(diag.size() == d, "diagonal length does not match 2^N");
  SparseMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Index i = 0; i < d; ++i) {
    if (diag[i] != Complex(0.0)) m.insert(i, i) = diag[i];
  }
  return QuantumOperator(num_qubits, std::move(m));
}

QuantumOperator QuantumOperator::diagonal(int num_qubits, const Eigen::VectorXd& diag) {
  return diagonal(num_qubits, ComplexVector(diag.cast<Complex>()));
}

Index QuantumOperator::nonzeros() const {
  if (is_sparse()) return std::get<SparseMatrix>(data_).nonZeros();
  const auto& d = std::get<DenseMatrix>(data_);
  return static_cast<Index>((d.array() != Complex(0.0)).count());
}

double QuantumOperator::fill_fraction() const {
  return static_cast<double>(nonzeros()) / (static_cast<double>(dim_) * static_cast<double>(dim_));
}

DenseMatrix QuantumOperator::to_dense() const {
  if (is_sparse()) return DenseMatrix(std::get<SparseMatrix>(data_));
  return std::get<DenseMatrix>(data_);
}

SparseMatrix QuantumOperator::to_sparse() const {
  if (is_sparse()) return std::get<SparseMatrix>(data_);
  SparseMatrix s = std::get<DenseMatrix>(data_).sparseView(Complex(0.0), 0.0);
  s.makeCompressed();
  return s;
}

QuantumOperator QuantumOperator::densified() const {
  QuantumOperator out = *this;
  out.data_ = to_dense();
  return out;
}

ComplexVector QuantumOperator::diagonal() const {
  return std::visit([](const auto& m) -> ComplexVector { return m.diagonal(); }, data_);
}

bool QuantumOperator::is_diagonal(double tol) const {
  if (is_sparse()) {
    const auto& s = std::get<SparseMatrix>(data_);
    for (Index r = 0; r < s.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(s, r); it; ++it) {
        if (it.col() != r && std::abs(it.value()) > tol) return false;
      }
    }
    return true;
  }
  DenseMatrix off = std::get<DenseMatrix>(data_);
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= tol;
}

QuantumOperator QuantumOperator::adjoint() const {
  if (is_sparse()) {
    return QuantumOperator(num_qubits_, SparseMatrix(std::get<SparseMatrix>(data_).adjoint()));
  }
  return QuantumOperator(num_qubits_, DenseMatrix(std::get<DenseMatrix>(data_).adjoint()));
}

double QuantumOperator::hermiticity_error() const { return max_abs_difference(*this, adjoint()); }

ComplexVector QuantumOperator::apply(const ComplexVector& v) const {
  require(v.size() == dim_, "vector length does not match operator dimension");
  return std::visit([&](const auto& m) -> ComplexVector { return m * v; }, data_);
}

DenseMatrix QuantumOperator::apply(const DenseMatrix& x) const {
  require(x.rows() == dim_, "matrix rows do not match operator dimension");
  return std::visit([&](const auto& m) -> DenseMatrix { return m * x; }, data_);
}

namespace {

void require_same_space(const QuantumOperator& a, const QuantumOperator& b) {
  require(a.num_qubits() == b.num_qubits(),
          "operators act on different qubit counts (" + std::to_string(a.num_qubits()) +
              " vs " + std::to_string(b.num_qubits()) + ")");
}

}  // namespace

QuantumOperator operator+(const QuantumOperator& a, const QuantumOperator& b) {
  require_same_space(a, b);
  if (a.is_sparse() && b.is_sparse()) {
    return QuantumOperator(a.num_qubits_, SparseMatrix(std::get<SparseMatrix>(a.data_) +
                                                       std::get<SparseMatrix>(b.data_)));
  }
  return QuantumOperator(a.num_qubits_, DenseMatrix(a.to_dense() + b.to_dense()));
}

QuantumOperator operator-(const QuantumOperator& a, const QuantumOperator& b) {
  return a + (-1.0) * b;
}

QuantumOperator operator*(const QuantumOperator& a, const QuantumOperator& b) {
  require_same_space(a, b);
  if (a.is_sparse() && b.is_sparse()) {
    SparseMatrix p = std::get<SparseMatrix>(a.data_) * std::get<SparseMatrix>(b.data_);
    return QuantumOperator(a.num_qubits_, std::move(p));
  }
  if (a.is_sparse()) {
    return QuantumOperator(a.num_qubits_,
                           DenseMatrix(std::get<SparseMatrix>(a.data_) * std::get<DenseMatrix>(b.data_)));
  }
  if (b.is_sparse()) {
    return QuantumOperator(a.num_qubits_,
                           DenseMatrix(std::get<DenseMatrix>(a.data_) * std::get<SparseMatrix>(b.data_)));
  }
  return QuantumOperator(a.num_qubits_,
                         DenseMatrix(std::get<DenseMatrix>(a.data_) * std::get<DenseMatrix>(b.data_)));
}

QuantumOperator operator*(Complex s, const QuantumOperator& a) {
  if (a.is_sparse()) return QuantumOperator(a.num_qubits_, SparseMatrix(s * std::get<SparseMatrix>(a.data_)));
  return QuantumOperator(a.num_qubits_, DenseMatrix(s * std::get<DenseMatrix>(a.data_)));
}

QuantumOperator operator*(double s, const QuantumOperator& a) { return Complex(s) * a; }

double max_abs_difference(const QuantumOperator& a, const QuantumOperator& b) {
  require_same_space(a, b);
  if (a.is_sparse() && b.is_sparse()) {
    SparseMatrix diff = std::get<SparseMatrix>(a.data_) - std::get<SparseMatrix>(b.data_);
    double worst = 0.0;
    for (Index k = 0; k < diff.nonZeros(); ++k) worst = std::max(worst, std::abs(diff.valuePtr()[k]));
    return worst;
  }
  DenseMatrix diff = a.to_dense() - b.to_dense();
  return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
}

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b) {
  return a * b - b * a;
}

QuantumOperator embed(const Eigen::Matrix2cd& op, int site, int num_qubits) {
  const Index d = hilbert_dim(num_qubits);
  require(site >= 0 && site < num_qubits,
          "site " + std::to_string(site) + " out of range for " + std::to_string(num_qubits) +
              " qubits");
  const std::uint64_t mask = site_mask(site, num_qubits);
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(2 * d));
  for (Index row = 0; row < d; ++row) {
    const auto r = static_cast<std::uint64_t>(row);
    const int rbit = (r & mask) ? 1 : 0;
    for (int cbit = 0; cbit < 2; ++cbit) {
      const Complex v = op(rbit, cbit);
      if (v == Complex(0.0)) continue;
      const std::uint64_t col = cbit ? (r | mask) : (r & ~mask);
      entries.emplace_back(row, static_cast<Index>(col), v);
    }
  }
  SparseMatrix m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  return QuantumOperator(num_qubits, std::move(m));
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(int num_qubits, ComplexVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() == hilbert_dim(num_qubits), "state length does not match 2^N");
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  const Index d = hilbert_dim(num_qubits);
  require(index < static_cast<std::uint64_t>(d), "basis index out of range");
  ComplexVector v = ComplexVector::Zero(d);
  v[static_cast<Index>(index)] = 1.0;
  return PureState(num_qubits, std::move(v));
}

void PureState::normalize() {
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite state");
  amplitudes_ /= n;
}

DensityMatrix::DensityMatrix(int num_qubits, DenseMatrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  const Index d = hilbert_dim(num_qubits);
  require(entries_.rows() == d && entries_.cols() == d, "density matrix shape does not match 2^N");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  ComplexVector v = psi.amplitudes() / psi.norm();
  return DensityMatrix(psi.num_qubits(), v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_projector(int num_qubits, std::uint64_t index) {
  return from_pure(PureState::basis(num_qubits, index));
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Index d = hilbert_dim(num_qubits);
  return DensityMatrix(num_qubits, DenseMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const DenseMatrix h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::max_off_diagonal() const {
  DenseMatrix off = entries_;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Expectations

Complex expectation(const QuantumOperator& op, const PureState& psi) {
  require(op.dim() == psi.dim(), "operator and state dimensions differ");
  const ComplexVector& v = psi.amplitudes();
  return v.dot(op.apply(v)) / v.squaredNorm();
}

Complex expectation(const QuantumOperator& op, const DensityMatrix& rho) {
  require(op.dim() == rho.dim(), "operator and density matrix dimensions differ");
  const DenseMatrix& r = rho.entries();
  Complex sum = 0.0;
  if (op.is_sparse()) {
    const SparseMatrix s = op.to_sparse();
    for (Index a = 0; a < s.outerSize(); ++a) {
      for (SparseMatrix::InnerIterator it(s, a); it; ++it) sum += it.value() * r(it.col(), a);
    }
    return sum;
  }
  const DenseMatrix d = op.to_dense();
  return (d.transpose().array() * r.array()).sum();
}

namespace {

double real_checked(Complex value) {
  if (std::abs(value.imag()) > 1e-9) {
    throw NumericalError("expectation of a Hermitian operator has imaginary part " +
                         std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace

double hermitian_expectation(const QuantumOperator& op, const PureState& psi) {
  return real_checked(expectation(op, psi));
}

double hermitian_expectation(const QuantumOperator& op, const DensityMatrix& rho) {
  return real_checked(expectation(op, rho));
}

// ---------------------------------------------------------------------------
// Vectorization

ComplexVector vectorize(const DensityMatrix& rho) {
  // Eigen stores column-major, so the raw buffer is already column-stacked.
  return Eigen::Map<const ComplexVector>(rho.entries().data(), rho.entries().size());
}

DensityMatrix devectorize(const ComplexVector& v) {
  const auto len = static_cast<std::uint64_t>(v.size());
  int num_qubits = 0;
  while (num_qubits <= kMaxQubits && (std::uint64_t{1} << (2 * num_qubits)) < len) ++num_qubits;
  require(num_qubits >= 1 && (std::uint64_t{1} << (2 * num_qubits)) == len,
          "vector length " + std::to_string(len) + " is not 4^N for any N >= 1");
  const Index d = Index{1} << num_qubits;
  return DensityMatrix(num_qubits, Eigen::Map<const DenseMatrix>(v.data(), d, d));
}

}  // namespace qhop
