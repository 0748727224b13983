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

#include "qhopfield/arnoldi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qhopfield/errors.hpp"
#include "qhopfield/random.hpp"

namespace qhop {

namespace {

// Orthogonalizes w against the first `j` columns of v (two Gram-Schmidt
// passes) and accumulates the coefficients into h.
void orthogonalize(const DenseMatrix& v, Index j, ComplexVector& w, Eigen::Ref<ComplexVector> h) {
  for (int pass = 0; pass < 2; ++pass) {
    const ComplexVector c = v.leftCols(j).adjoint() * w;
    w.noalias() -= v.leftCols(j) * c;
    h.head(j) += c;
  }
}

ComplexVector random_vector(Index n, Rng& rng) {
  ComplexVector x(n);
  for (Index i = 0; i < n; ++i) x[i] = Complex(uniform_open01(rng) - 0.5, uniform_open01(rng) - 0.5);
  return x;
}

bool before(const Complex& a, const Complex& b, RitzOrder order) {
  if (order == RitzOrder::largest_real) {
    if (a.real() != b.real()) return a.real() > b.real();
  } else {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
  }
  return a.imag() > b.imag();
}

// Exchanges the adjacent diagonal entries j, j + 1 of the upper-triangular
// Schur factor t by a plane rotation, updating the Schur vectors z.
void swap_schur(DenseMatrix& t, DenseMatrix& z, Index j) {
  const Complex f = t(j, j + 1);
  const Complex g = t(j + 1, j + 1) - t(j, j);
  if (g == Complex(0.0)) return;
  double c;
  Complex sn;
  if (f == Complex(0.0)) {
    c = 0.0;
    sn = std::conj(g) / std::abs(g);
  } else {
    const double d = std::hypot(std::abs(f), std::abs(g));
    c = std::abs(f) / d;
    sn = (f / std::abs(f)) * std::conj(g) / d;
  }
  const Index n = t.rows();
  // The 2 x 2 block only swaps its diagonal; rotate the rest of rows j, j + 1
  // and columns j, j + 1.
  for (Index col = j + 2; col < n; ++col) {
    const Complex x = t(j, col), y = t(j + 1, col);
    t(j, col) = c * x + sn * y;
    t(j + 1, col) = c * y - std::conj(sn) * x;
  }
  for (Index row = 0; row < j; ++row) {
    const Complex x = t(row, j), y = t(row, j + 1);
    t(row, j) = c * x + std::conj(sn) * y;
    t(row, j + 1) = c * y - sn * x;
  }
  std::swap(t(j, j), t(j + 1, j + 1));
  for (Index row = 0; row < z.rows(); ++row) {
    const Complex x = z(row, j), y = z(row, j + 1);
    z(row, j) = c * x + std::conj(sn) * y;
    z(row, j + 1) = c * y - sn * x;
  }
}

}  // namespace

ArnoldiResult arnoldi_eigs(const LinearMap& a, Index n, int k, RitzOrder order,
                           const ArnoldiOptions& options) {
  require(n >= 1, "Arnoldi needs a nonempty space");
  require(k >= 1 && k < n, "Arnoldi eigenvalue count must be in [1, n)");
  int m = options.krylov_dim > 0 ? options.krylov_dim : std::max(2 * k + 20, 40);
  m = static_cast<int>(std::min<Index>(m, n));
  require(m > k, "Krylov dimension must exceed the eigenvalue count");
  require(options.tol > 0.0 && options.max_restarts >= 0, "invalid Arnoldi options");

  Rng rng(options.seed);
  DenseMatrix v = DenseMatrix::Zero(n, m + 1);
  DenseMatrix h = DenseMatrix::Zero(m + 1, m);
  ComplexVector w(n);
  {
    ComplexVector x = random_vector(n, rng);
    v.col(0) = x / x.norm();
  }
  int kept = 0;
  ArnoldiResult result;
  double scale = 0.0;

  for (int restart = 0;; ++restart) {
    for (int j = kept; j < m; ++j) {
      a(v.col(j), w);
      const double wn0 = w.norm();
      orthogonalize(v, j + 1, w, h.col(j));
      scale = std::max(scale, wn0);
      double beta = w.norm();
      if (beta <= 1e-12 * std::max(scale, 1e-300)) {
        // Invariant subspace: continue with a fresh orthogonal direction.
        ComplexVector x = random_vector(n, rng);
        ComplexVector dummy = ComplexVector::Zero(j + 1);
        orthogonalize(v, j + 1, x, dummy);
        w = x;
        beta = 0.0;
        v.col(j + 1) = w / w.norm();
      } else {
        v.col(j + 1) = w / beta;
      }
      h(j + 1, j) = beta;
    }

    // Schur form H_m = Z T Z^H with the wanted Ritz values moved to the top.
    Eigen::ComplexSchur<DenseMatrix> schur(h.topRows(m));
    DenseMatrix t = schur.matrixT();
    DenseMatrix z = schur.matrixU();
    const int p = std::min(m - 1, std::max(k + 1, k + (m - k) / 2));
    for (int i = 0; i < p; ++i) {
      int best = i;
      for (int j = i + 1; j < m; ++j) {
        if (before(t(j, j), t(best, best), order)) best = j;
      }
      for (int j = best; j > i; --j) swap_schur(t, z, j - 1);
    }
    const Eigen::RowVectorXcd brow = h.row(m) * z;

    // Ritz pairs of the leading k x k block.
    Eigen::ComplexEigenSolver<DenseMatrix> es(t.topLeftCorner(k, k));
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const ComplexVector x = es.eigenvectors().col(i).normalized();
      worst = std::max(worst, std::abs((brow.head(k) * x).value()));
    }
    result.restarts = restart;
    result.residual = worst;
    const bool done = worst <= options.tol;
    if (done || restart >= options.max_restarts) {
      result.converged = done;
      std::vector<int> order_k(static_cast<std::size_t>(k));
      std::iota(order_k.begin(), order_k.end(), 0);
      const ComplexVector& vals = es.eigenvalues();
      std::sort(order_k.begin(), order_k.end(),
                [&](int x, int y) { return before(vals[x], vals[y], order); });
      result.values.clear();
      result.vectors.resize(n, k);
      const DenseMatrix basis = v.leftCols(m) * z.leftCols(k);
      for (int i = 0; i < k; ++i) {
        const int c = order_k[static_cast<std::size_t>(i)];
        result.values.push_back(vals[c]);
        ComplexVector y = basis * es.eigenvectors().col(c);
        result.vectors.col(i) = y / y.norm();
      }
      return result;
    }

    // Keep the leading p Schur vectors and the residual direction.
    const DenseMatrix vz = v.leftCols(m) * z.leftCols(p);
    v.col(p) = v.col(m);
    v.leftCols(p) = vz;
    h.setZero();
    h.topLeftCorner(p, p) = t.topLeftCorner(p, p).triangularView<Eigen::Upper>();
    h.block(p, 0, 1, p) = brow.head(p);
    kept = p;
  }
}

}  // namespace qhop
