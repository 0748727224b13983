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

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "qhopfield/classical.hpp"
#include "qhopfield/errors.hpp"
#include "qhopfield/experiments.hpp"
#include "qhopfield/observables.hpp"
#include "qhopfield/random.hpp"

namespace qhop {

using nlohmann::json;

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t grid_point, std::uint64_t realization) {
  return split_seed(master, grid_point, realization);
}

std::uint64_t dynamics_seed(std::uint64_t realization_seed) { return split_seed(realization_seed, 1); }

SampleStats sample_stats(std::span<const double> values) {
  require(!values.empty(), "statistics of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd, values.size()};
}

SampleStats abs_time_average(std::span<const double> values, double burn_in_fraction) {
  require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, "burn-in fraction must be in [0, 1)");
  const auto skip = static_cast<std::size_t>(std::floor(burn_in_fraction * static_cast<double>(values.size())));
  std::vector<double> abs_values;
  for (std::size_t i = skip; i < values.size(); ++i) abs_values.push_back(std::abs(values[i]));
  return sample_stats(abs_values);
}

int alternating_extrema(std::span<const double> values, double threshold) {
  int count = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double v = values[i];
    const bool is_max = v > values[i - 1] && v >= values[i + 1];
    const bool is_min = v < values[i - 1] && v <= values[i + 1];
    if (!(is_max || is_min) || std::abs(v) < threshold) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if ((is_max && sign < 0) || (is_min && sign > 0)) continue;
    if (sign == last_sign) break;
    last_sign = sign;
    ++count;
  }
  return count;
}

double late_amplitude(std::span<const double> values, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, "late-window fraction must be in (0, 1]");
  require(!values.empty(), "late amplitude of an empty series");
  const auto n = values.size();
  const auto start = n - std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  const auto [lo, hi] = std::minmax_element(values.begin() + static_cast<std::ptrdiff_t>(start), values.end());
  return 0.5 * (*hi - *lo);
}

std::vector<NamedObservable> pattern_overlaps(const PatternSet& patterns, bool with_abs) {
  const auto xi = patterns.pattern(0);
  std::vector<NamedObservable> obs{{"m_z1", overlap_operator(xi, Axis::z).op}};
  if (with_abs) obs.push_back({"abs_m_z1", abs_overlap_operator(xi, Axis::z)});
  return obs;
}

DampingRun damping_run(const PatternSet& patterns, double omega, double temperature, double dt,
                       double t_max, int record_every, double min_temperature) {
  const ModelSpec model = make_model(patterns, omega, temperature, min_temperature);
  const HopfieldGenerator generator(model);
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.record_every = record_every;
  const auto rho0 = DensityMatrix::basis_projector(model.num_qubits(), patterns.basis_index(0, -1));
  const auto obs = pattern_overlaps(patterns, true);
  auto result = integrate(rho0, generator, cfg, obs);
  return {model.num_qubits(), omega, temperature, std::move(result.series)};
}

DecayScan decay_scan(std::span<const DampingRun> runs) {
  DecayScan scan;
  for (const auto& run : runs) {
    try {
      auto env = peak_envelope(run.series, "m_z1");
      scan.fits.push_back(fit_decay_constant(env));
      scan.envelopes.push_back({run.num_qubits, std::move(env)});
    } catch (const UsageError& e) {
      scan.skipped.push_back("N=" + std::to_string(run.num_qubits) + ": " + e.what());
    }
  }
  if (scan.fits.size() >= 3) {
    std::vector<double> n, tau;
    for (std::size_t i = 0; i < scan.fits.size(); ++i) {
      n.push_back(scan.envelopes[i].num_qubits);
      tau.push_back(scan.fits[i].tau);
    }
    scan.delta = fit_power_law(n, tau);
    scan.has_delta = true;
  }
  return scan;
}

std::string canonical_pattern_key(const PatternSet& patterns) {
  const Eigen::MatrixXi& xi = patterns.matrix();
  const int p = patterns.num_patterns();
  const int n = patterns.num_neurons();
  require(p <= 30, "canonical_pattern_key supports at most 30 patterns");
  Eigen::MatrixXi gauged(p, n);
  for (int i = 0; i < n; ++i) gauged.col(i) = xi.col(i) * xi(0, i);
  std::vector<std::vector<int>> best;
  const std::uint32_t flips = 1u << (p - 1);
  for (std::uint32_t mask = 0; mask < flips; ++mask) {
    std::vector<std::vector<int>> cols(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(p)));
    for (int i = 0; i < n; ++i) {
      for (int mu = 0; mu < p; ++mu) {
        const int sign = mu > 0 && (mask >> (mu - 1)) & 1u ? -1 : 1;
        cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(mu)] = sign * gauged(mu, i);
      }
    }
    std::sort(cols.begin(), cols.end());
    if (mask == 0 || cols < best) best = std::move(cols);
  }
  std::string key = std::to_string(n) + "x" + std::to_string(p) + ":";
  for (const auto& col : best) {
    for (int v : col) key += v > 0 ? '+' : '-';
    key += '|';
  }
  return key;
}

double classical_master_abs_overlap(const PatternSet& patterns, double temperature) {
  const int n = patterns.num_neurons();
  require(n <= kMaxClassicalMasterSpins, "classical master equation limited to N <= " +
                                             std::to_string(kMaxClassicalMasterSpins));
  require(temperature > 0.0, "temperature must be > 0");
  const WeightMatrix w = hebb_weights(patterns);
  Eigen::MatrixXd q = classical_master_matrix(w, 1.0 / temperature);
  const Eigen::Index dim = q.rows();
  // Q p = 0 with sum(p) = 1: replace the (redundant) last balance row.
  q.row(dim - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(dim - 1) = 1.0;
  const Eigen::VectorXd p = q.fullPivLu().solve(rhs);
  const auto xi = patterns.pattern(0);
  double total = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto config = SpinConfig::from_basis_index(static_cast<std::uint64_t>(k), n);
    total += p(k) * std::abs(classical_overlap(config, xi));
  }
  return total;
}

CapacitySample capacity_sample(const PatternSet& patterns, double omega, double temperature,
                               const CapacityIntegration& integration, double min_temperature) {
  const ModelSpec model = make_model(patterns, omega, temperature, min_temperature);
  const HopfieldGenerator generator(model);
  IntegrationConfig cfg;
  cfg.t_max = integration.t_max;
  cfg.steady_tol = integration.steady_tol;
  double dt = integration.dt;
  if (integration.stability_cap) dt = std::min(dt, stable_rk4_step(generator));
  // Whole number of steps so that the horizon is exactly t_max.
  cfg.dt = integration.t_max / std::ceil(integration.t_max / dt - 1e-12);
  const auto rho0 = DensityMatrix::basis_projector(model.num_qubits(), patterns.basis_index(0));
  const auto steady = steady_state_by_integration(rho0, generator, cfg);
  CapacitySample sample{{}, 0.0, steady.converged, steady.time, cfg.dt, steady.residual};
  for (int mu = 0; mu < patterns.num_patterns(); ++mu) {
    const auto op = abs_overlap_operator(patterns.pattern(mu), Axis::z);
    sample.abs_overlaps.push_back(hermitian_expectation(op, steady.state));
  }
  sample.max_abs_overlap = *std::max_element(sample.abs_overlaps.begin(), sample.abs_overlaps.end());
  return sample;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double monotonic_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

}  // namespace

RunContext::RunContext(const ExperimentConfig& config, std::ostream& log)
    : config_(config),
      log_(log),
      out_dir_(config.string("output_dir")),
      workers_(static_cast<int>(config.integer("workers"))),
      seed_(config.unsigned_integer("seed")),
      started_(utc_now()),
      start_seconds_(monotonic_seconds()) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir_, ec);
  if (ec) throw UsageError("cannot create output directory '" + out_dir_.string() + "': " + ec.message());
  write_json("resolved_config.json", config_.resolved());
}

std::filesystem::path RunContext::path(const std::string& relative) const { return out_dir_ / relative; }

void RunContext::write_text(const std::string& relative, const std::string& text) const {
  const auto p = path(relative);
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw UsageError("cannot write '" + p.string() + "'");
}

void RunContext::write_json(const std::string& relative, const json& doc) const {
  write_text(relative, doc.dump(2) + "\n");
}

void RunContext::write_series(const std::string& relative, const ObservableSeries& series) const {
  std::ostringstream os;
  series.write_csv(os);
  write_text(relative, os.str());
}

void RunContext::warn(const std::string& message) {
  warnings_.push_back(message);
  log_ << "warning: " << message << "\n";
}

void RunContext::record_run(json run) { runs_.push_back(std::move(run)); }

void RunContext::finish() {
  json meta;
  meta["experiment"] = config_.experiment();
  meta["versions"] = {{"qhopfield", kVersion},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                    "." + std::to_string(EIGEN_MINOR_VERSION)},
                      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  meta["seed"] = seed_;
  meta["workers"] = workers_;
  meta["started_utc"] = started_;
  meta["wall_seconds"] = monotonic_seconds() - start_seconds_;
  meta["warnings"] = warnings_;
  meta["non_converged"] = non_converged_;
  meta["runs"] = runs_;
  write_json("metadata.json", meta);
}

void run_experiment(const ExperimentConfig& config, std::ostream& log) {
  RunContext ctx(config, log);
  const std::string& name = config.experiment();
  if (name == "classical-compare") {
    cmd_classical_compare(ctx);
  } else if (name == "trajectory-panels") {
    cmd_trajectory_panels(ctx);
  } else if (name == "damping-scan") {
    cmd_damping_scan(ctx);
  } else if (name == "gap-scan") {
    cmd_gap_scan(ctx);
  } else if (name == "capacity-map") {
    cmd_capacity_map(ctx);
  } else {
    throw UsageError("unknown experiment '" + name + "'");
  }
  ctx.finish();
}

}  // namespace qhop
