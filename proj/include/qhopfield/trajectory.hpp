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
#include <span>
#include <string>
#include <vector>

#include "qhopfield/generator.hpp"
#include "qhopfield/model.hpp"
#include "qhopfield/series.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

struct TrajectoryConfig {
  double dt = 0.01;
  double t_max = 10.0;
  int record_every = 10;
  std::uint64_t seed = 0;
  int n_traj = 1;
  /// Concurrent workers for run_batch; results do not depend on it.
  int workers = 1;
  /// Relative tolerance of the norm-threshold crossing located by bisection.
  double crossing_tol = 1e-10;

  void validate() const;
  long long num_steps() const;
};

/// H_eff = H - (i/2) sum_k L_k^dagger L_k.
QuantumOperator effective_hamiltonian(const ModelSpec& model);

struct TrajectoryResult {
  ObservableSeries series;
  std::uint64_t seed;
  std::vector<double> jump_times;
  std::vector<int> jump_channels;

  /// {seed, jump_count, jump_times, jump_channels}
  nlohmann::json sidecar() const;
};

/// One quantum-jump trajectory by the waiting-time method: draw r in (0,1),
/// propagate the unnormalized state under H_eff until |psi|^2 falls to r,
/// jump through channel k with probability <L_k^dagger L_k> / sum_j
/// <L_j^dagger L_j>, renormalize and redraw. Observables are evaluated on
/// the normalized state at the recording grid. Fully determined by
/// (cfg.seed, cfg.dt, model).
TrajectoryResult run_trajectory(const PureState& psi0, const HopfieldGenerator& generator,
                                const TrajectoryConfig& cfg,
                                std::span<const NamedObservable> observables);

TrajectoryResult run_trajectory(const PureState& psi0, const ModelSpec& model,
                                const TrajectoryConfig& cfg,
                                std::span<const NamedObservable> observables);

/// Mean and standard error (sample standard deviation / sqrt(n)) across
/// trajectories at every recorded time.
struct BatchSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stderr_;
  int n_traj = 0;

  const std::vector<double>& mean_of(const std::string& name) const;
  const std::vector<double>& stderr_of(const std::string& name) const;
  /// Header `t,<obs>_mean,<obs>_stderr,...`.
  void write_csv(std::ostream& os) const;
};

/// Seed of trajectory `index` within a batch.
std::uint64_t trajectory_seed(std::uint64_t batch_seed, std::uint64_t index);

/// Runs cfg.n_traj trajectories with seeds trajectory_seed(cfg.seed, j),
/// spread over cfg.workers threads; the reduction runs in trajectory-index
/// order so the result is independent of scheduling.
BatchSeries run_batch(const PureState& psi0, const HopfieldGenerator& generator,
                      const TrajectoryConfig& cfg, std::span<const NamedObservable> observables);

BatchSeries run_batch(const PureState& psi0, const ModelSpec& model, const TrajectoryConfig& cfg,
                      std::span<const NamedObservable> observables);

}  // namespace qhop
