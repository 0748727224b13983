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
#include <cstdint>
#include <span>
#include <vector>

#include "qhopfield/model.hpp"
#include "qhopfield/random.hpp"
#include "qhopfield/series.hpp"

namespace qhop {

/// Classical neuron configuration with entries in {-1, +1}.
class SpinConfig {
 public:
  explicit SpinConfig(std::vector<int> spins);
  /// Configuration of a computational basis index (bit 0 is spin +1).
  static SpinConfig from_basis_index(std::uint64_t index, int num_spins);

  int size() const { return static_cast<int>(s_.size()); }
  int operator[](int i) const { return s_[static_cast<std::size_t>(i)]; }
  void set(int i, int value);
  const std::vector<int>& spins() const { return s_; }
  std::uint64_t basis_index() const;

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<int> s_;
};

enum class UpdateOrder { ascending, random };

/// One Monte Carlo sweep: N heat-bath updates. Site i becomes +1 with
/// probability gamma_+(Delta E_i)^2 = 1 / (1 + exp(-2 beta Delta E_i)),
/// regardless of its current value.
SpinConfig glauber_sweep(SpinConfig config, const WeightMatrix& weights, double beta, Rng& rng,
                         UpdateOrder order = UpdateOrder::ascending);

/// (1/N) sum_i xi_i s_i.
double classical_overlap(const SpinConfig& config, std::span<const int> pattern);

/// Runs n_mcs sweeps from config0 and records the overlap with `pattern`
/// after each sweep, in a series with time label `mcs` and column `m_z`.
ObservableSeries run_mcs(const SpinConfig& config0, const WeightMatrix& weights, double beta,
                         long long n_mcs, std::uint64_t seed, std::span<const int> pattern,
                         UpdateOrder order = UpdateOrder::ascending);

inline constexpr int kMaxClassicalMasterSpins = 12;

/// Continuous-time generator Q on configuration probabilities (dp/dt = Q p)
/// with the same single-flip rates as the diagonal of the quantum model:
/// flipping spin i up costs gamma_+(Delta E_i)^2 and down gamma_-(Delta
/// E_i)^2. Columns sum to zero.
Eigen::MatrixXd classical_master_matrix(const WeightMatrix& weights, double beta);

/// exp(Q t) p0.
Eigen::VectorXd propagate_classical(const Eigen::MatrixXd& generator, const Eigen::VectorXd& p0,
                                    double t);

}  // namespace qhop
