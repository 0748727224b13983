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

#include "qhopfield/trajectory.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "qhopfield/errors.hpp"
#include "qhopfield/parallel.hpp"
#include "qhopfield/random.hpp"
#include "qhopfield/rk4.hpp"

namespace qhop {

void TrajectoryConfig::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "trajectory dt must be > 0");
  require(std::isfinite(t_max) && t_max >= dt, "trajectory t_max must be >= dt");
  require(record_every >= 1, "trajectory record_every must be >= 1");
  require(n_traj >= 1, "trajectory n_traj must be >= 1");
  require(workers >= 1, "trajectory workers must be >= 1");
  require(crossing_tol > 0.0 && crossing_tol < 1e-3, "trajectory crossing_tol must be in (0, 1e-3)");
}

long long TrajectoryConfig::num_steps() const {
  return static_cast<long long>(std::llround(t_max / dt));
}

QuantumOperator effective_hamiltonian(const ModelSpec& model) {
  const int n = model.num_qubits();
  QuantumOperator decay = QuantumOperator::zero(n);
  for (const auto& l : jump_operators(model.weights, model.beta())) decay = decay + l.adjoint() * l;
  return hamiltonian(model.omega, n) + Complex(0.0, -0.5) * decay;
}

nlohmann::json TrajectoryResult::sidecar() const {
  return {{"seed", seed},
          {"jump_count", jump_times.size()},
          {"jump_times", jump_times},
          {"jump_channels", jump_channels}};
}

namespace {

std::vector<std::string> observable_names(std::span<const NamedObservable> observables, Index dim) {
  std::vector<std::string> names;
  for (const auto& o : observables) {
    require(o.op.dim() == dim, "observable '" + o.name + "' has the wrong dimension");
    names.push_back(o.name);
  }
  return names;
}

// Unnormalized state under H_eff, with the pending jump threshold r.
class JumpPropagator {
 public:
  JumpPropagator(const HopfieldGenerator& generator, const TrajectoryConfig& cfg, ComplexVector psi,
                 TrajectoryResult& result)
      : generator_(generator),
        cfg_(cfg),
        psi_(std::move(psi)),
        rng_(cfg.seed),
        weights_(static_cast<std::size_t>(generator.num_channels())),
        result_(result) {
    threshold_ = uniform_open01(rng_);
  }

  const ComplexVector& state() const { return psi_; }

  /// Advances from t to t + h, performing every jump inside the interval.
  void advance(double t, double h) {
    auto deriv = [this](const ComplexVector& in, ComplexVector& out) {
      generator_.effective_derivative(in, out);
    };
    while (h > 0.0) {
      start_ = psi_;
      deriv(start_, stepper_.slope());
      stepper_.step_with_slope(psi_, h, deriv);
      if (!generator_.has_jumps() || psi_.squaredNorm() > threshold_) return;
      // Bisection on the sub-step length for |psi|^2 = r.
      double lo = 0.0, hi = h;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        psi_ = start_;
        stepper_.step_with_slope(psi_, mid, deriv);
        const double n2 = psi_.squaredNorm();
        if (std::abs(n2 - threshold_) <= cfg_.crossing_tol * threshold_) {
          lo = hi = mid;
          break;
        }
        (n2 > threshold_ ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * h) break;
      }
      const double tau = hi;
      if (tau != lo) {
        psi_ = start_;
        stepper_.step_with_slope(psi_, tau, deriv);
      }
      jump(t + tau);
      t += tau;
      h -= tau;
    }
  }

 private:
  void jump(double t) {
    generator_.jump_weights(psi_, weights_);
    double total = 0.0;
    for (double w : weights_) total += w;
    if (!(total > 0.0)) {
      throw NumericalError("trajectory reached its jump threshold with zero total jump rate at t = " +
                           std::to_string(t));
    }
    double sum = 0.0;
    for (double w : weights_) sum += w / total;
    if (std::abs(sum - 1.0) > 1e-12) {
      throw NumericalError("jump channel probabilities sum to " + std::to_string(sum));
    }
    const double u = uniform_open01(rng_) * total;
    int channel = static_cast<int>(weights_.size()) - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      acc += weights_[k];
      if (u < acc && weights_[k] > 0.0) {
        channel = static_cast<int>(k);
        break;
      }
    }
    while (weights_[static_cast<std::size_t>(channel)] <= 0.0) --channel;
    generator_.apply_jump(channel, psi_, start_);
    psi_ = start_ / start_.norm();
    result_.jump_times.push_back(t);
    result_.jump_channels.push_back(channel);
    threshold_ = uniform_open01(rng_);
  }

  const HopfieldGenerator& generator_;
  const TrajectoryConfig& cfg_;
  ComplexVector psi_, start_;
  Rng rng_;
  double threshold_ = 0.0;
  std::vector<double> weights_;
  Rk4Stepper<ComplexVector> stepper_;
  TrajectoryResult& result_;
};

}  // namespace

TrajectoryResult run_trajectory(const PureState& psi0, const HopfieldGenerator& generator,
                                const TrajectoryConfig& cfg,
                                std::span<const NamedObservable> observables) {
  cfg.validate();
  require(psi0.num_qubits() == generator.num_qubits(), "initial state and model sizes differ");
  require(std::abs(psi0.norm() - 1.0) <= 1e-9, "initial trajectory state must be normalized");
  TrajectoryResult result{ObservableSeries("t", observable_names(observables, psi0.dim())), cfg.seed, {}, {}};
  JumpPropagator prop(generator, cfg, psi0.amplitudes(), result);
  std::vector<double> values(observables.size());
  auto record = [&](double t) {
    PureState psi(psi0.num_qubits(), prop.state());
    psi.normalize();
    for (std::size_t k = 0; k < observables.size(); ++k) {
      values[k] = hermitian_expectation(observables[k].op, psi);
    }
    result.series.append(t, values);
  };
  record(0.0);
  const long long steps = cfg.num_steps();
  for (long long s = 1; s <= steps; ++s) {
    prop.advance(static_cast<double>(s - 1) * cfg.dt, cfg.dt);
    if (s % cfg.record_every == 0) record(static_cast<double>(s) * cfg.dt);
  }
  return result;
}

TrajectoryResult run_trajectory(const PureState& psi0, const ModelSpec& model,
                                const TrajectoryConfig& cfg,
                                std::span<const NamedObservable> observables) {
  HopfieldGenerator generator(model);
  return run_trajectory(psi0, generator, cfg, observables);
}

namespace {

const std::vector<double>& find_column(const BatchSeries& b, const std::vector<std::vector<double>>& cols,
                                       const std::string& name) {
  for (std::size_t k = 0; k < b.names.size(); ++k) {
    if (b.names[k] == name) return cols[k];
  }
  throw UsageError("unknown observable '" + name + "'");
}

}  // namespace

const std::vector<double>& BatchSeries::mean_of(const std::string& name) const {
  return find_column(*this, mean, name);
}

const std::vector<double>& BatchSeries::stderr_of(const std::string& name) const {
  return find_column(*this, stderr_, name);
}

void BatchSeries::write_csv(std::ostream& os) const {
  os << "t";
  for (const auto& n : names) os << ',' << n << "_mean," << n << "_stderr";
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format_double(times[i]);
    for (std::size_t k = 0; k < names.size(); ++k) {
      os << ',' << format_double(mean[k][i]) << ',' << format_double(stderr_[k][i]);
    }
    os << '\n';
  }
}

std::uint64_t trajectory_seed(std::uint64_t batch_seed, std::uint64_t index) {
  return split_seed(batch_seed, index);
}

BatchSeries run_batch(const PureState& psi0, const HopfieldGenerator& generator,
                      const TrajectoryConfig& cfg, std::span<const NamedObservable> observables) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_traj);
  std::vector<std::vector<std::vector<double>>> runs(n);
  std::vector<double> times;
  parallel_for(n, cfg.workers, [&](std::size_t j) {
    TrajectoryConfig one = cfg;
    one.seed = trajectory_seed(cfg.seed, j);
    TrajectoryResult r = run_trajectory(psi0, generator, one, observables);
    auto& cols = runs[j];
    for (std::size_t k = 0; k < observables.size(); ++k) cols.push_back(r.series.column(k));
    if (j == 0) times = r.series.times();
  });
  BatchSeries out;
  out.times = std::move(times);
  out.n_traj = cfg.n_traj;
  const std::size_t m = out.times.size();
  for (std::size_t k = 0; k < observables.size(); ++k) {
    out.names.push_back(observables[k].name);
    std::vector<double> mean(m, 0.0), err(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += runs[j][k][i];
      const double mu = s / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t j = 0; j < n; ++j) ss += (runs[j][k][i] - mu) * (runs[j][k][i] - mu);
      mean[i] = mu;
      err[i] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
    out.mean.push_back(std::move(mean));
    out.stderr_.push_back(std::move(err));
  }
  return out;
}

BatchSeries run_batch(const PureState& psi0, const ModelSpec& model, const TrajectoryConfig& cfg,
                      std::span<const NamedObservable> observables) {
  HopfieldGenerator generator(model);
  return run_batch(psi0, generator, cfg, observables);
}

}  // namespace qhop
