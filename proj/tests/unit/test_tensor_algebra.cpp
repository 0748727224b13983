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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qhopfield/errors.hpp"
#include "qhopfield/random.hpp"
#include "qhopfield/tensor_algebra.hpp"

using namespace qhop;

namespace {

Eigen::Matrix2cd random_2x2(Rng& rng) {
  Eigen::Matrix2cd m;
  for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(uniform_open01(rng) - 0.5, uniform_open01(rng) - 0.5);
  return m;
}

DenseMatrix random_matrix(Index dim, Rng& rng) {
  DenseMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = Complex(uniform_open01(rng) - 0.5, uniform_open01(rng) - 0.5);
  return m;
}

DensityMatrix random_density(int n, Rng& rng) {
  const DenseMatrix a = random_matrix(Index{1} << n, rng);
  DenseMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix(n, rho);
}

/// Kronecker product written out by index arithmetic.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

TEST_CASE("pauli matrices") {
  const Eigen::Matrix2cd z = pauli(PauliKind::z);
  CHECK(z(0, 0) == Complex(1.0));
  CHECK(z(1, 1) == Complex(-1.0));
  CHECK(z(0, 1) == Complex(0.0));
  CHECK(z(1, 0) == Complex(0.0));

  // Raising |down> = (0, 1) gives |up> = (1, 0) with coefficient 1.
  const Eigen::Vector2cd down(0.0, 1.0);
  const Eigen::Vector2cd up = pauli(PauliKind::plus) * down;
  CHECK(std::abs(up(0) - Complex(1.0)) == 0.0);
  CHECK(std::abs(up(1)) == 0.0);

  CHECK((pauli(PauliKind::x) * pauli(PauliKind::x) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
  CHECK((pauli(PauliKind::plus).adjoint() - pauli(PauliKind::minus)).norm() == 0.0);
  const Eigen::Matrix2cd plus = (pauli(PauliKind::x) + kI * pauli(PauliKind::y)) / 2.0;
  CHECK((plus - pauli(PauliKind::plus)).norm() == 0.0);

  CHECK(parse_pauli_kind("minus") == PauliKind::minus);
  CHECK_THROWS_AS(parse_pauli_kind("w"), UsageError);
}

TEST_CASE("embed") {
  const auto z1 = embed(pauli(PauliKind::z), 0, 1);
  CHECK((z1.to_dense() - DenseMatrix(pauli(PauliKind::z))).norm() == 0.0);

  const auto c = commutator(embed(pauli(PauliKind::z), 0, 2), embed(pauli(PauliKind::x), 1, 2));
  CHECK(c.to_dense().norm() == 0.0);

  // Qubit 0 is the most significant bit: sigma^z on qubit 1 alternates.
  const ComplexVector d = embed(pauli(PauliKind::z), 1, 2).diagonal();
  CHECK(d(0) == Complex(1.0));
  CHECK(d(1) == Complex(-1.0));
  CHECK(d(2) == Complex(1.0));
  CHECK(d(3) == Complex(-1.0));

  // I (x) op (x) I against a hand-written Kronecker product.
  const DenseMatrix id = DenseMatrix::Identity(2, 2);
  const DenseMatrix x = pauli(PauliKind::x);
  const DenseMatrix expected = kron(kron(id, x), id);
  CHECK((embed(pauli(PauliKind::x), 1, 3).to_dense() - expected).norm() == 0.0);

  CHECK_THROWS_AS(embed(pauli(PauliKind::z), 2, 2), UsageError);
  CHECK_THROWS_AS(embed(pauli(PauliKind::z), -1, 2), UsageError);
}

TEST_CASE("embedded operators on different sites commute") {
  Rng rng(11);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_2x2(rng);
      const auto b = random_2x2(rng);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const auto ea = embed(a, i, n);
          const auto eb = embed(b, j, n);
          CHECK(max_abs_difference(ea * eb, eb * ea) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("expectation values") {
  const auto up = PureState::basis(1, 0);
  CHECK(hermitian_expectation(embed(pauli(PauliKind::z), 0, 1), up) == doctest::Approx(1.0));
  CHECK(std::abs(hermitian_expectation(embed(pauli(PauliKind::x), 0, 1), up)) <= 1e-15);
  CHECK(std::abs(hermitian_expectation(embed(pauli(PauliKind::z), 0, 1), DensityMatrix::maximally_mixed(1))) <= 1e-15);
  CHECK_THROWS_AS(expectation(embed(pauli(PauliKind::z), 0, 2), up), UsageError);
}

TEST_CASE("expectation is linear and conjugate-symmetric") {
  Rng rng(5);
  const int n = 3;
  const auto rho = random_density(n, rng);
  const QuantumOperator a(n, random_matrix(8, rng));
  const QuantumOperator b(n, random_matrix(8, rng));
  const Complex s(0.3, -1.2);
  const Complex lhs = expectation(a + s * b, rho);
  const Complex rhs = expectation(a, rho) + s * expectation(b, rho);
  CHECK(std::abs(lhs - rhs) <= 1e-13);
  CHECK(std::abs(expectation(a.adjoint(), rho) - std::conj(expectation(a, rho))) <= 1e-13);
}

TEST_CASE("vectorization") {
  const ComplexVector v = vectorize(DensityMatrix::maximally_mixed(1));
  REQUIRE(v.size() == 4);
  CHECK(v(0) == Complex(0.5));
  CHECK(v(1) == Complex(0.0));
  CHECK(v(2) == Complex(0.0));
  CHECK(v(3) == Complex(0.5));

  // |up><down|: row 0, column 1, so index 0 + 1 * 2 under column stacking.
  DenseMatrix m = DenseMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const ComplexVector w = vectorize(DensityMatrix(1, m));
  for (Index i = 0; i < 4; ++i) CHECK(w(i) == Complex(i == 2 ? 1.0 : 0.0));

  Rng rng(3);
  for (int n = 1; n <= 3; ++n) {
    const auto rho = random_density(n, rng);
    CHECK((devectorize(vectorize(rho)).entries() - rho.entries()).norm() == 0.0);
  }
  CHECK_THROWS_AS(devectorize(ComplexVector::Zero(8)), UsageError);
  CHECK_THROWS_AS(devectorize(ComplexVector::Zero(9)), UsageError);
}

TEST_CASE("sparse and dense storage agree") {
  Rng rng(9);
  for (int n = 1; n <= 5; ++n) {
    QuantumOperator a = embed(random_2x2(rng), static_cast<int>(uniform_index(rng, n)), n);
    QuantumOperator b = embed(random_2x2(rng), static_cast<int>(uniform_index(rng, n)), n);
    a = a + embed(random_2x2(rng), 0, n);
    const QuantumOperator sparse_product = a * b;
    const QuantumOperator dense_product = a.densified() * b.densified();
    CHECK(max_abs_difference(sparse_product, dense_product) <= 1e-12);
    CHECK((a.to_dense() - a.densified().to_dense()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("storage switches to dense above the fill threshold") {
  CHECK(embed(pauli(PauliKind::z), 0, 4).is_sparse());
  Rng rng(1);
  const SparseMatrix dense_fill = random_matrix(8, rng).sparseView();
  const QuantumOperator full(3, dense_fill);
  CHECK_FALSE(full.is_sparse());
}

TEST_CASE("density matrix checks") {
  Rng rng(21);
  const auto rho = random_density(3, rng);
  CHECK(rho.hermiticity_error() <= 1e-15);
  CHECK(std::abs(rho.trace() - Complex(1.0)) <= 1e-14);
  CHECK(rho.min_eigenvalue() >= -1e-12);
  const auto pure = DensityMatrix::from_pure(PureState::basis(2, 3));
  CHECK(pure.entries()(3, 3) == Complex(1.0));
  CHECK(pure.max_off_diagonal() == 0.0);
  CHECK_THROWS_AS(PureState(2, ComplexVector::Zero(3)), UsageError);
}
