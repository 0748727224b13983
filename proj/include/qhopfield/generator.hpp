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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qhopfield/model.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

/// Matrix-free action of the model's generators on states.
///
/// Every jump operator is a single bit flip scaled by a diagonal amplitude,
/// and the Hamiltonian is a sum of bit flips, so both the Lindblad
/// right-hand side and the effective non-Hermitian evolution can be applied
/// with bit arithmetic in O(N 4^N) (resp. O(N 2^N)) work without assembling
/// any operator. The QuantumOperator forms in model.hpp describe the same
/// maps and are used to cross-check these kernels.
///
/// Channel k acts on site k / 2; even k raise (L_{i+}), odd k lower (L_{i-}).
class HopfieldGenerator {
 public:
  explicit HopfieldGenerator(const ModelSpec& model, bool with_jumps = true);

  int num_qubits() const { return num_qubits_; }
  Index dim() const { return dim_; }
  double omega() const { return omega_; }
  int num_channels() const { return static_cast<int>(amplitudes_.size()); }
  bool has_jumps() const { return !amplitudes_.empty(); }

  /// Gamma amplitude of channel k as a function of the basis index. Values
  /// do not depend on the bit of the channel's own site.
  const Eigen::VectorXd& amplitude(int channel) const { return amplitudes_[static_cast<std::size_t>(channel)]; }
  /// Diagonal of sum_k L_k^dagger L_k.
  const Eigen::VectorXd& decay_rates() const { return decay_; }

  /// out = L(rho) = -i[H, rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho} / 2).
  /// Requires a Hermitian rho: only the lower triangle is computed and the
  /// upper one is filled by conjugation.
  void lindblad_rhs(const DenseMatrix& rho, DenseMatrix& out) const;

  /// The same linear map applied to an arbitrary (non-Hermitian) matrix,
  /// as L(X) = L(A) + i L(B) with X = A + i B and A, B Hermitian.
  void apply_liouvillian(const DenseMatrix& x, DenseMatrix& out) const;

  /// out = -i H_eff psi with H_eff = H - (i/2) sum_k L_k^dagger L_k.
  void effective_derivative(const ComplexVector& psi, ComplexVector& out) const;

  /// out = L_k psi.
  void apply_jump(int channel, const ComplexVector& psi, ComplexVector& out) const;

  /// <psi| L_k^dagger L_k |psi> for every channel (psi need not be normalized).
  void jump_weights(const ComplexVector& psi, std::span<double> weights) const;

 private:
  int num_qubits_;
  Index dim_;
  double omega_;
  std::vector<Eigen::VectorXd> amplitudes_;
  Eigen::VectorXd decay_;
  // Interleaved-layout copies for the density-matrix kernel.
  std::vector<std::vector<double>> amplitudes2_;
  std::vector<double> decay2_;
};

}  // namespace qhop
