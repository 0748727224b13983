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

#include "qhopfield/lindblad.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qhopfield/errors.hpp"
#include "qhopfield/rk4.hpp"

namespace qhop {

void IntegrationConfig::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "integrator dt must be > 0");
  require(std::isfinite(t_max) && t_max >= dt, "integrator t_max must be >= dt");
  require(record_every >= 1, "integrator record_every must be >= 1");
  require(steady_tol > 0.0, "integrator steady_tol must be > 0");
  require(trace_tol > 0.0 && hermiticity_tol > 0.0, "integrator tolerances must be > 0");
}

long long IntegrationConfig::num_steps() const {
  return static_cast<long long>(std::llround(t_max / dt));
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelSpec& model) {
  require(rho.num_qubits() == model.num_qubits(), "density matrix and model sizes differ");
  HopfieldGenerator generator(model);
  DenseMatrix out;
  generator.lindblad_rhs(rho.entries(), out);
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

namespace {

std::string time_string(double t) {
  std::ostringstream os;
  os.precision(10);
  os << t;
  return os.str();
}

void check_trace(const DenseMatrix& rho, double t, const IntegrationConfig& cfg) {
  const double drift = std::abs(rho.trace() - Complex(1.0));
  if (!(drift <= cfg.trace_tol)) {
    throw NumericalError("integration failed at t = " + time_string(t) + ": trace drift " +
                         std::to_string(drift) + " exceeds " + std::to_string(cfg.trace_tol) +
                         "; reduce dt (currently " + std::to_string(cfg.dt) + ")");
  }
}

void check_hermiticity(const DenseMatrix& rho, double t, const IntegrationConfig& cfg) {
  const double err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (!(err <= cfg.hermiticity_tol)) {
    throw NumericalError("integration failed at t = " + time_string(t) + ": Hermiticity error " +
                         std::to_string(err) + " exceeds " + std::to_string(cfg.hermiticity_tol) +
                         "; reduce dt (currently " + std::to_string(cfg.dt) + ")");
  }
}

}  // namespace

IntegrationResult integrate(const DensityMatrix& rho0, const HopfieldGenerator& generator,
                            const IntegrationConfig& cfg,
                            std::span<const NamedObservable> observables,
                            const StateObserver& on_sample) {
  cfg.validate();
  require(rho0.num_qubits() == generator.num_qubits(), "initial state and model sizes differ");
  std::vector<std::string> names;
  for (const auto& o : observables) {
    require(o.op.dim() == rho0.dim(), "observable '" + o.name + "' has the wrong dimension");
    names.push_back(o.name);
  }
  ObservableSeries series("t", names);
  DensityMatrix state = rho0;
  DenseMatrix& rho = state.entries();
  std::vector<double> values(observables.size());

  auto record = [&](double t) {
    check_hermiticity(rho, t, cfg);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      values[k] = hermitian_expectation(observables[k].op, state);
    }
    series.append(t, values);
    if (on_sample) on_sample(t, state);
  };

  auto rhs = [&generator](const DenseMatrix& in, DenseMatrix& out) { generator.lindblad_rhs(in, out); };
  Rk4Stepper<DenseMatrix> stepper;
  const long long steps = cfg.num_steps();
  check_trace(rho, 0.0, cfg);
  record(0.0);
  for (long long s = 1; s <= steps; ++s) {
    stepper.step(rho, cfg.dt, rhs);
    const double t = static_cast<double>(s) * cfg.dt;
    check_trace(rho, t, cfg);
    if (s % cfg.record_every == 0) record(t);
  }
  return {std::move(series), std::move(state)};
}

ObservableSeries integrate(const DensityMatrix& rho0, const ModelSpec& model,
                           const IntegrationConfig& cfg,
                           std::span<const NamedObservable> observables) {
  HopfieldGenerator generator(model);
  return integrate(rho0, generator, cfg, observables).series;
}

SteadyStateResult steady_state_by_integration(const DensityMatrix& rho0,
                                              const HopfieldGenerator& generator,
                                              const IntegrationConfig& cfg) {
  cfg.validate();
  require(rho0.num_qubits() == generator.num_qubits(), "initial state and model sizes differ");
  DensityMatrix state = rho0;
  DenseMatrix& rho = state.entries();
  auto rhs = [&generator](const DenseMatrix& in, DenseMatrix& out) { generator.lindblad_rhs(in, out); };
  Rk4Stepper<DenseMatrix> stepper;
  const long long steps = cfg.num_steps();
  check_trace(rho, 0.0, cfg);
  for (long long s = 0;; ++s) {
    rhs(rho, stepper.slope());
    const double residual = stepper.slope().cwiseAbs().maxCoeff();
    const double t = static_cast<double>(s) * cfg.dt;
    if (residual <= cfg.steady_tol || s == steps) {
      check_hermiticity(rho, t, cfg);
      return {std::move(state), residual <= cfg.steady_tol, t, residual};
    }
    stepper.step_with_slope(rho, cfg.dt, rhs);
    check_trace(rho, t + cfg.dt, cfg);
  }
}

SteadyStateResult steady_state_by_integration(const DensityMatrix& rho0, const ModelSpec& model,
                                              const IntegrationConfig& cfg) {
  HopfieldGenerator generator(model);
  return steady_state_by_integration(rho0, generator, cfg);
}

double stable_rk4_step(const HopfieldGenerator& generator) {
  const double bound = 2.0 * generator.num_qubits() * generator.omega() + 2.0 * generator.decay_rates().maxCoeff();
  return bound > 0.0 ? 2.5 / bound : INFINITY;
}

}  // namespace qhop
