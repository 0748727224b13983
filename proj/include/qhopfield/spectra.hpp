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
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhopfield/arnoldi.hpp"
#include "qhopfield/model.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

inline constexpr int kDefaultLiouvillianMaxQubits = 7;
inline constexpr int kDefaultDenseSpectrumMaxQubits = 5;
/// Eigenvalues with |Lambda| at or below this count as steady states.
inline constexpr double kKernelTol = 1e-9;
/// Eigenvalues with |Im Lambda| above this count as oscillating.
inline constexpr double kNonrealTol = 1e-8;

/// Superoperator of the master equation acting on column-stacked density
/// matrices (vec(rho)[a + b d] = rho(a, b)):
///   L = -i (I (x) H - H^T (x) I)
///       + sum_k [ conj(L_k) (x) L_k - (I (x) L_k^dag L_k + (L_k^dag L_k)^T (x) I) / 2 ].
SparseMatrix build_liouvillian(const ModelSpec& model,
                               int max_qubits = kDefaultLiouvillianMaxQubits);

enum class SpectrumMethod { dense, iterative };

std::string to_string(SpectrumMethod method);
SpectrumMethod parse_spectrum_method(std::string_view name);

/// How the iterative solver reaches the eigenvalues of largest real part.
/// `direct` runs Arnoldi on L itself; `semigroup` runs it on the short-time
/// propagator p(L) ~ exp(tau L) (an RK4 polynomial, which shares L's
/// eigenvectors) and recovers each Lambda from its Rayleigh quotient with L.
/// `automatic` tries direct with a small restart budget, then semigroup.
enum class IterativeMode { automatic, direct, semigroup };

struct SpectrumOptions {
  /// Eigenvalues wanted; 0 means the full spectrum (dense only).
  int k = 0;
  SpectrumMethod method = SpectrumMethod::dense;
  int dense_max_qubits = kDefaultDenseSpectrumMaxQubits;
  IterativeMode mode = IterativeMode::automatic;
  /// Accepted residual |L v - Lambda v| / |v| of every iterative pair.
  double residual_tol = 1e-8;
  /// Propagation time of the semigroup operator.
  double tau = 0.1;
  /// Restart budget of the direct attempt in automatic mode.
  int direct_restarts = 60;
  ArnoldiOptions arnoldi;
};

struct SpectrumReport {
  /// Sorted by descending real part (ties by descending imaginary part).
  std::vector<Complex> eigenvalues;
  int steady_index = -1;
  /// Leading nonreal eigenvalue and its conjugate partner (-1 when the
  /// partner is not among the computed eigenvalues).
  std::optional<std::pair<int, int>> osc_pair;
  double gap = 0.0;
  double osc_freq = 0.0;
  SpectrumMethod method = SpectrumMethod::dense;
  /// Solver variant actually used: dense, direct or semigroup.
  std::string solver;
  /// Residuals |L v - Lambda v| / |v| (iterative only).
  std::vector<double> residuals;

  int num_qubits = 0;
  double omega = 0.0;
  double temperature = 0.0;
  int num_patterns = 0;
  std::uint64_t seed = 0;

  /// {N, Omega, T, P, seed, method, eigenvalues: [[re, im], ...],
  ///  steady_index, osc_pair, gap, osc_freq}
  nlohmann::json to_json() const;
};

/// Spectrum of a vectorized Liouvillian of `num_qubits` qubits.
SpectrumReport spectrum(const SparseMatrix& liouvillian, int num_qubits,
                        const SpectrumOptions& options);

/// Same, with the model parameters recorded in the report. The iterative
/// path applies L matrix-free.
SpectrumReport spectrum(const ModelSpec& model, const SpectrumOptions& options);

struct OscillationGap {
  double gap;
  double frequency;
};

/// |Re Lambda| and |Im Lambda| of the nonreal eigenvalue with the largest
/// real part. Throws NumericalError when none was computed.
OscillationGap oscillation_gap(const SpectrumReport& report);

/// Unit-trace Hermitian state spanning the kernel of L. Throws
/// NumericalError when more than one eigenvalue lies within kernel_tol of
/// zero (listing them) or when the kernel residual exceeds 1e-8.
DensityMatrix steady_state_from_kernel(const SparseMatrix& liouvillian,
                                       double kernel_tol = kKernelTol);

/// Full biorthogonal eigendecomposition L = R diag(Lambda) R^-1; the rows of
/// `left` are the left eigenvectors with left.row(i) * right.col(j) = delta_ij.
struct EigenDecomposition {
  ComplexVector eigenvalues;
  DenseMatrix right;
  DenseMatrix left;
};

EigenDecomposition eigendecomposition(const SparseMatrix& liouvillian);

/// rho(t) = sum_i exp(Lambda_i t) c_i R_i with c_i = <<L_i | rho(0)>>.
DensityMatrix propagate_spectral(const EigenDecomposition& decomposition,
                                 const DensityMatrix& rho0, double t);

}  // namespace qhop
