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

// Experiment harness: the building blocks of every subcommand (exposed for
// tests) and the subcommand entry points.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "qhopfield/config.hpp"
#include "qhopfield/fitting.hpp"
#include "qhopfield/lindblad.hpp"
#include "qhopfield/model.hpp"
#include "qhopfield/series.hpp"
#include "qhopfield/spectra.hpp"
#include "qhopfield/trajectory.hpp"

namespace qhop {

inline constexpr const char* kVersion = "0.1.0";

/// Seed of realization r at grid point g: split_seed(master, g, r). Pattern
/// sets use this seed directly; stochastic dynamics use
/// dynamics_seed(realization_seed).
std::uint64_t realization_seed(std::uint64_t master, std::uint64_t grid_point, std::uint64_t realization);
std::uint64_t dynamics_seed(std::uint64_t realization_seed);

struct SampleStats {
  double mean;
  /// Sample standard deviation (n - 1 denominator; 0 for one sample).
  double stddev;
  std::size_t count;
};

SampleStats sample_stats(std::span<const double> values);

/// Statistics of |x| over the samples after the first `burn_in_fraction`.
SampleStats abs_time_average(std::span<const double> values, double burn_in_fraction);

/// Number of successive local extrema of alternating sign whose magnitude is
/// at least `threshold`, counted from the start of the series until the
/// first extremum that does not alternate.
int alternating_extrema(std::span<const double> values, double threshold);

/// Half the peak-to-peak range of `values` over the last `fraction` of the
/// samples.
double late_amplitude(std::span<const double> values, double fraction);

/// m_z and |m_z| of pattern 1 (column names "m_z1", "abs_m_z1").
std::vector<NamedObservable> pattern_overlaps(const PatternSet& patterns, bool with_abs);

/// Master-equation run from the antipattern of pattern 1.
struct DampingRun {
  int num_qubits;
  double omega;
  double temperature;
  ObservableSeries series;
};

DampingRun damping_run(const PatternSet& patterns, double omega, double temperature, double dt,
                       double t_max, int record_every, double min_temperature = kDefaultMinTemperature);

/// Envelope of m_z1 and its decay fit for every size; sizes with fewer than
/// three cycles are skipped and reported in `skipped`.
struct DecayScan {
  std::vector<SizedEnvelope> envelopes;
  std::vector<DecayFit> fits;
  std::vector<std::string> skipped;
  /// tau(N) = a N^delta; fit.b is delta. Only valid when `has_delta`.
  PowerLawFit delta{};
  bool has_delta = false;
};

DecayScan decay_scan(std::span<const DampingRun> runs);

/// Equivalence key of a pattern set under the exact symmetries of the
/// dynamics of the |m_z^mu| observables started from pattern 1: the gauge
/// transformation mapping pattern 1 to all +1, sign flips of the other
/// patterns and site permutations.
std::string canonical_pattern_key(const PatternSet& patterns);

/// Steady distribution of the classical master generator (the Omega = 0
/// diagonal dynamics) and its <|m_z^1|>.
double classical_master_abs_overlap(const PatternSet& patterns, double temperature);

/// Steady-state integration from the basis state of pattern 1.
struct CapacityIntegration {
  double dt = 0.25;
  double t_max = 400.0;
  double steady_tol = 1e-7;
  /// Caps dt at stable_rk4_step() of each model.
  bool stability_cap = true;
};

struct CapacitySample {
  /// <|m_z^mu|> for every stored pattern.
  std::vector<double> abs_overlaps;
  double max_abs_overlap;
  bool converged;
  double time;
  double dt;
  double residual;
};

CapacitySample capacity_sample(const PatternSet& patterns, double omega, double temperature,
                               const CapacityIntegration& integration,
                               double min_temperature = kDefaultMinTemperature);

/// Output directory bookkeeping shared by the subcommands.
class RunContext {
 public:
  RunContext(const ExperimentConfig& config, std::ostream& log);

  const ExperimentConfig& config() const { return config_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }
  int workers() const { return workers_; }
  std::uint64_t seed() const { return seed_; }
  std::ostream& log() { return log_; }

  std::filesystem::path path(const std::string& relative) const;
  void write_text(const std::string& relative, const std::string& text) const;
  void write_json(const std::string& relative, const nlohmann::json& doc) const;
  void write_series(const std::string& relative, const ObservableSeries& series) const;

  void warn(const std::string& message);
  void record_run(nlohmann::json run);
  void count_non_converged(long long n) { non_converged_ += n; }

  /// Writes metadata.json (version, seeds, warnings, wall-clock).
  void finish();

 private:
  ExperimentConfig config_;
  std::ostream& log_;
  std::filesystem::path out_dir_;
  int workers_;
  std::uint64_t seed_;
  std::vector<std::string> warnings_;
  nlohmann::json runs_ = nlohmann::json::array();
  long long non_converged_ = 0;
  std::string started_;
  double start_seconds_;
};

void cmd_classical_compare(RunContext& ctx);
void cmd_trajectory_panels(RunContext& ctx);
void cmd_damping_scan(RunContext& ctx);
void cmd_gap_scan(RunContext& ctx);
void cmd_capacity_map(RunContext& ctx);

/// Runs the subcommand named by config.experiment(), writing the resolved
/// config and metadata to the output directory.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace qhop
