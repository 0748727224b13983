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

#include "qhopfield/generator.hpp"

#include <algorithm>
#include <cstdint>

#include "qhopfield/errors.hpp"

namespace qhop {

namespace {

// Each entry repeated twice, matching interleaved complex storage.
std::vector<double> duplicate(const Eigen::VectorXd& v) {
  std::vector<double> out(static_cast<std::size_t>(2 * v.size()));
  for (Index a = 0; a < v.size(); ++a) {
    out[static_cast<std::size_t>(2 * a)] = v[a];
    out[static_cast<std::size_t>(2 * a + 1)] = v[a];
  }
  return out;
}

}  // namespace

HopfieldGenerator::HopfieldGenerator(const ModelSpec& model, bool with_jumps)
    : num_qubits_(model.num_qubits()),
      dim_(hilbert_dim(model.num_qubits())),
      omega_(model.omega),
      decay_(Eigen::VectorXd::Zero(hilbert_dim(model.num_qubits()))) {
  if (!with_jumps) {
    decay2_ = duplicate(decay_);
    return;
  }
  const double beta = model.beta();
  amplitudes_.reserve(static_cast<std::size_t>(2 * num_qubits_));
  for (int i = 0; i < num_qubits_; ++i) {
    const Eigen::VectorXd field = local_field_values(i, model.weights);
    Eigen::VectorXd gp(dim_), gm(dim_);
    const std::uint64_t mask = site_mask(i, num_qubits_);
    for (Index a = 0; a < dim_; ++a) {
      gp[a] = gamma_plus(beta, field[a]);
      gm[a] = gamma_minus(beta, field[a]);
      // sigma^- sigma^+ projects on spin down (bit set), sigma^+ sigma^- on up.
      decay_[a] += (static_cast<std::uint64_t>(a) & mask) ? gp[a] * gp[a] : gm[a] * gm[a];
    }
    amplitudes_.push_back(std::move(gp));
    amplitudes_.push_back(std::move(gm));
  }
  for (const auto& amp : amplitudes_) amplitudes2_.push_back(duplicate(amp));
  decay2_ = duplicate(decay_);
}

void HopfieldGenerator::lindblad_rhs(const DenseMatrix& rho, DenseMatrix& out) const {
  require(rho.rows() == dim_ && rho.cols() == dim_, "density matrix dimension mismatch");
  out.resize(dim_, dim_);
  // The generator maps Hermitian matrices to Hermitian matrices, so only the
  // lower triangle (rows a >= b of column b) is computed and then mirrored.
  // Work is done on interleaved (re, im) doubles: every coefficient is real
  // except the -i of the commutator, so each term is a contiguous real axpy.
  const Index d = dim_;
  const Index d2 = 2 * d;
  const double* __restrict r = reinterpret_cast<const double*>(rho.data());
  double* __restrict o = reinterpret_cast<double*>(out.data());
  const double* __restrict decay = decay2_.data();
  std::vector<double> acc_buffer(static_cast<std::size_t>(d2));
  double* __restrict acc = acc_buffer.data();

  for (Index b = 0; b < d; ++b) {
    const Index lo = 2 * b;
    const double* __restrict rb = r + b * d2;
    double* __restrict ob = o + b * d2;
    const double db = decay_[b];
    for (Index k = lo; k < d2; ++k) ob[k] = -0.5 * (decay[k] + db) * rb[k];

    if (omega_ != 0.0) {
      // acc = sum_i (sigma_i^x rho)(:, b) - (rho sigma_i^x)(:, b)
      for (Index k = lo; k < d2; ++k) acc[k] = 0.0;
      for (int i = 0; i < num_qubits_; ++i) {
        const auto m = static_cast<Index>(site_mask(i, num_qubits_));
        const Index m2 = 2 * m;
        if (m2 < 8) {
          for (Index k = lo; k < d2; ++k) acc[k] += rb[k ^ m2];
        } else {
          for (Index base = (lo / (2 * m2)) * (2 * m2); base < d2; base += 2 * m2) {
            for (Index k = std::max(base, lo); k < base + m2; ++k) acc[k] += rb[k + m2];
            for (Index k = std::max(base + m2, lo); k < base + 2 * m2; ++k) acc[k] += rb[k - m2];
          }
        }
        const double* __restrict rflip = r + (b ^ m) * d2;
        for (Index k = lo; k < d2; ++k) acc[k] -= rflip[k];
      }
      for (Index k = lo; k < d2; k += 2) {
        // -i * Omega * acc
        ob[k] += omega_ * acc[k + 1];
        ob[k + 1] -= omega_ * acc[k];
      }
    }

    if (amplitudes_.empty()) continue;
    for (int i = 0; i < num_qubits_; ++i) {
      const auto m = static_cast<Index>(site_mask(i, num_qubits_));
      const Index m2 = 2 * m;
      const Index first_base = (lo / (2 * m2)) * (2 * m2);
      if ((b & m) == 0) {
        // L_{i+} rho L_{i+}^dagger: (a, b) <- (a | m, b | m) for a, b with the bit clear.
        const double* __restrict g = amplitudes2_[static_cast<std::size_t>(2 * i)].data();
        const double* __restrict src = r + (b | m) * d2;
        const double gb = amplitudes_[static_cast<std::size_t>(2 * i)][b];
        for (Index base = first_base; base < d2; base += 2 * m2) {
          for (Index k = std::max(base, lo); k < base + m2; ++k) ob[k] += gb * g[k] * src[k + m2];
        }
      } else {
        const double* __restrict g = amplitudes2_[static_cast<std::size_t>(2 * i + 1)].data();
        const double* __restrict src = r + (b & ~m) * d2;
        const double gb = amplitudes_[static_cast<std::size_t>(2 * i + 1)][b];
        for (Index base = first_base; base < d2; base += 2 * m2) {
          for (Index k = std::max(base + m2, lo); k < base + 2 * m2; ++k) ob[k] += gb * g[k] * src[k - m2];
        }
      }
    }
  }

  // Mirror the strict lower triangle into the upper one, tile by tile.
  constexpr Index kTile = 32;
  Complex* c = out.data();
  for (Index bt = 0; bt < d; bt += kTile) {
    const Index b_end = std::min(bt + kTile, d);
    for (Index at = bt; at < d; at += kTile) {
      const Index a_end = std::min(at + kTile, d);
      for (Index b = bt; b < b_end; ++b) {
        for (Index a = std::max(at, b + 1); a < a_end; ++a) c[b + a * d] = std::conj(c[a + b * d]);
      }
    }
  }
}

void HopfieldGenerator::effective_derivative(const ComplexVector& psi, ComplexVector& out) const {
  require(psi.size() == dim_, "state dimension mismatch");
  out.resize(dim_);
  const Index d = dim_;
  const Complex* p = psi.data();
  Complex* o = out.data();
  for (Index a = 0; a < d; ++a) o[a] = (-0.5 * decay_[a]) * p[a];
  if (omega_ == 0.0) return;
  for (Index a = 0; a < d; ++a) {
    Complex s = 0.0;
    for (int i = 0; i < num_qubits_; ++i) s += p[a ^ static_cast<Index>(site_mask(i, num_qubits_))];
    o[a] += Complex(omega_ * s.imag(), -omega_ * s.real());
  }
}

void HopfieldGenerator::apply_jump(int channel, const ComplexVector& psi, ComplexVector& out) const {
  require(channel >= 0 && channel < num_channels(), "jump channel out of range");
  require(psi.size() == dim_, "state dimension mismatch");
  out.setZero(dim_);
  const auto m = static_cast<Index>(site_mask(channel / 2, num_qubits_));
  const double* g = amplitudes_[static_cast<std::size_t>(channel)].data();
  const bool raise = channel % 2 == 0;
  for (Index a = 0; a < dim_; ++a) {
    const bool down = (a & m) != 0;
    if (raise && !down) out[a] = g[a] * psi[a | m];
    if (!raise && down) out[a] = g[a] * psi[a & ~m];
  }
}

void HopfieldGenerator::jump_weights(const ComplexVector& psi, std::span<double> weights) const {
  require(psi.size() == dim_, "state dimension mismatch");
  require(static_cast<int>(weights.size()) == num_channels(), "weights span has the wrong length");
  for (int i = 0; i < num_qubits_; ++i) {
    const auto m = static_cast<Index>(site_mask(i, num_qubits_));
    const double* gp = amplitudes_[static_cast<std::size_t>(2 * i)].data();
    const double* gm = amplitudes_[static_cast<std::size_t>(2 * i + 1)].data();
    double up = 0.0;
    double down = 0.0;
    for (Index a = 0; a < dim_; ++a) {
      const double p2 = std::norm(psi[a]);
      if (a & m) {
        up += gp[a] * gp[a] * p2;  // raising acts on spin-down components
      } else {
        down += gm[a] * gm[a] * p2;
      }
    }
    weights[static_cast<std::size_t>(2 * i)] = up;
    weights[static_cast<std::size_t>(2 * i + 1)] = down;
  }
}

void HopfieldGenerator::apply_liouvillian(const DenseMatrix& x, DenseMatrix& out) const {
  const DenseMatrix a = 0.5 * (x + x.adjoint());
  const DenseMatrix b = Complex(0.0, -0.5) * (x - x.adjoint());
  DenseMatrix lb;
  lindblad_rhs(a, out);
  lindblad_rhs(b, lb);
  out += kI * lb;
}

}  // namespace qhop
