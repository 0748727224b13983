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

#include <cstdint>
#include <functional>
#include <vector>

#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

/// out = A in; `out` is resized by the caller-visible contract to in.size().
using LinearMap = std::function<void(const ComplexVector& in, ComplexVector& out)>;

enum class RitzOrder { largest_real, largest_magnitude };

struct ArnoldiOptions {
  /// Krylov subspace dimension; 0 picks max(2k + 20, 40).
  int krylov_dim = 0;
  int max_restarts = 500;
  /// Ritz pairs whose estimated residual is below `tol` are accepted.
  double tol = 1e-10;
  std::uint64_t seed = 0x5eed;
};

struct ArnoldiResult {
  std::vector<Complex> values;
  /// Unit-norm Ritz vectors, one column per value.
  DenseMatrix vectors;
  bool converged = false;
  int restarts = 0;
  /// Largest estimated residual among the returned pairs.
  double residual = 0.0;
};

/// Thick-restart Arnoldi iteration for the k eigenvalues of A first in
/// `order`. On restart, the wanted Ritz vectors (orthonormalized) and the
/// latest Arnoldi vector are kept, so the projected matrix stays exact and
/// the kept directions are never discarded. Returns the best available
/// pairs even when not converged; the caller decides how to fail.
ArnoldiResult arnoldi_eigs(const LinearMap& a, Index n, int k, RitzOrder order,
                           const ArnoldiOptions& options);

}  // namespace qhop
