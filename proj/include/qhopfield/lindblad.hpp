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

#include <functional>
#include <span>

#include "qhopfield/generator.hpp"
#include "qhopfield/model.hpp"
#include "qhopfield/series.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

struct IntegrationConfig {
  double dt = 0.01;
  double t_max = 10.0;
  /// Steps between recorded samples.
  int record_every = 10;
  /// Steady state: max |d rho / dt| entry at or below this value.
  double steady_tol = 1e-7;
  double trace_tol = 1e-8;
  double hermiticity_tol = 1e-9;

  void validate() const;
  /// Number of RK4 steps covering [0, t_max].
  long long num_steps() const;
};

/// d rho / dt of the master equation for `model`.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelSpec& model);

using StateObserver = std::function<void(double t, const DensityMatrix& rho)>;

struct IntegrationResult {
  ObservableSeries series;
  DensityMatrix final_state;
};

/// Fixed-step RK4 propagation. Records Tr(O rho) for every observable at
/// t = 0 and every `record_every` steps; `on_sample` (optional) receives the
/// state at each recorded time, e.g. for checkpointing.
///
/// Throws NumericalError naming the first time at which |Tr rho - 1| exceeds
/// trace_tol or, at recorded samples, max|rho - rho^dagger| exceeds
/// hermiticity_tol.
IntegrationResult integrate(const DensityMatrix& rho0, const HopfieldGenerator& generator,
                            const IntegrationConfig& cfg,
                            std::span<const NamedObservable> observables,
                            const StateObserver& on_sample = {});

ObservableSeries integrate(const DensityMatrix& rho0, const ModelSpec& model,
                           const IntegrationConfig& cfg,
                           std::span<const NamedObservable> observables);

struct SteadyStateResult {
  DensityMatrix state;
  /// True when the RHS criterion fired, false when t_max was reached first.
  bool converged;
  double time;
  /// max |d rho / dt| entry of the returned state.
  double residual;
};

SteadyStateResult steady_state_by_integration(const DensityMatrix& rho0,
                                              const HopfieldGenerator& generator,
                                              const IntegrationConfig& cfg);

SteadyStateResult steady_state_by_integration(const DensityMatrix& rho0, const ModelSpec& model,
                                              const IntegrationConfig& cfg);

/// Largest RK4 step that is stable for every eigenvalue of the generator.
/// Eigenvalues satisfy |Lambda| <= 2 |H| + 2 |sum_k L_k^dag L_k| = 2 N Omega +
/// 2 max(decay), and the RK4 stability region contains the closed left
/// half-disk of radius 2.5.
double stable_rk4_step(const HopfieldGenerator& generator);

}  // namespace qhop
