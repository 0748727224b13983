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

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "qhopfield/classical.hpp"
#include "qhopfield/errors.hpp"
#include "qhopfield/experiments.hpp"
#include "qhopfield/observables.hpp"
#include "qhopfield/parallel.hpp"
#include "qhopfield/random.hpp"

namespace qhop {

using nlohmann::json;

namespace {

constexpr int kMaxMasterQubits = 10;
constexpr int kMaxTrajectoryQubits = 12;
constexpr double kBurnIn = 0.1;
constexpr double kLateWindow = 0.25;

/// Compact rendering for file names and log lines.
std::string tag(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string num(double x) { return format_double(x); }

/// Rows of comma-separated cells under a fixed header.
class CsvTable {
 public:
  explicit CsvTable(const std::string& header) { text_ << header << "\n"; }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((text_ << (first ? "" : ",") << cells, first = false), ...);
    text_ << "\n";
  }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

std::string to_csv(const EnvelopePoints& env) {
  std::ostringstream os;
  env.write_csv(os);
  return os.str();
}

std::string to_csv(const Histogram& h) {
  std::ostringstream os;
  h.write_csv(os);
  return os.str();
}

std::string to_csv(const BatchSeries& b) {
  std::ostringstream os;
  b.write_csv(os);
  return os.str();
}

TrajectoryConfig trajectory_config(const ExperimentConfig& cfg, const std::string& prefix, std::uint64_t seed) {
  TrajectoryConfig tc;
  tc.dt = cfg.number(prefix + "/dt");
  tc.t_max = cfg.number(prefix + "/t_max");
  tc.record_every = static_cast<int>(cfg.integer(prefix + "/record_every"));
  tc.seed = seed;
  tc.validate();
  return tc;
}

void check_master_size(RunContext& ctx, int n) {
  require(n >= 2, "N must be >= 2");
  if (n > kMaxMasterQubits) ctx.warn("N=" + std::to_string(n) + " exceeds the master-equation reach of " +
                                     std::to_string(kMaxMasterQubits) + " qubits");
}

// ---------------------------------------------------------------------------

struct ComparePoint {
  double temperature;
  std::uint64_t seed;
  ObservableSeries quantum{"t", {}};
  json jumps;
  ObservableSeries classical{"mcs", {}};
  SampleStats quantum_abs{};
  SampleStats classical_abs{};
  double master_abs = std::nan("");
};

ComparePoint compare_point(const ExperimentConfig& cfg, int n, int p, double omega, double temperature,
                           std::uint64_t seed, bool with_master) {
  ComparePoint out;
  out.temperature = temperature;
  out.seed = seed;
  const double burn_in = cfg.number("burn_in_fraction");
  const PatternSet patterns = generate_patterns(n, p, seed, cfg.boolean("balanced_first"));
  const ModelSpec model = make_model(patterns, omega, temperature, cfg.number("min_temperature"));
  const auto obs = pattern_overlaps(patterns, false);
  const TrajectoryConfig tc = trajectory_config(cfg, "trajectory", dynamics_seed(seed));
  auto traj = run_trajectory(PureState::basis(n, patterns.basis_index(0)), model, tc, obs);
  out.quantum = std::move(traj.series);
  out.jumps = traj.sidecar();
  out.quantum_abs = abs_time_average(out.quantum.column("m_z1"), burn_in);

  const auto xi = patterns.pattern(0);
  out.classical = run_mcs(SpinConfig(xi), model.weights, model.beta(), cfg.integer("n_mcs"),
                          split_seed(seed, 2), xi);
  out.classical_abs = abs_time_average(out.classical.column("m_z"), burn_in);

  if (with_master) {
    if (omega == 0.0) {
      out.master_abs = classical_master_abs_overlap(patterns, temperature);
    } else {
      IntegrationConfig ic;
      ic.dt = cfg.number("integrator/dt");
      ic.t_max = cfg.number("integrator/t_max");
      ic.steady_tol = cfg.number("integrator/steady_tol");
      const auto steady = steady_state_by_integration(
          DensityMatrix::basis_projector(n, patterns.basis_index(0)), HopfieldGenerator(model), ic);
      out.master_abs = hermitian_expectation(abs_overlap_operator(xi, Axis::z), steady.state);
    }
  }
  return out;
}

}  // namespace

void cmd_classical_compare(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const int n = cfg.integers("N").front();
  const int p = cfg.integers("P").front();
  const double omega = cfg.numbers("Omega").front();
  const auto panel_t = cfg.numbers("T");
  const auto sweep_t = cfg.numbers("sweep_T");
  const bool with_master = cfg.boolean("master_steady_state");
  require(n <= kMaxTrajectoryQubits, "classical-compare runs trajectories; N must be <= 12");
  if (with_master && omega != 0.0) check_master_size(ctx, n);

  const std::size_t n_panels = panel_t.size();
  std::vector<ComparePoint> points(n_panels + sweep_t.size());
  parallel_for(points.size(), ctx.workers(), [&](std::size_t i) {
    const bool panel = i < n_panels;
    const double t = panel ? panel_t[i] : sweep_t[i - n_panels];
    points[i] = compare_point(cfg, n, p, omega, t, realization_seed(ctx.seed(), i, 0), !panel && with_master);
  });

  CsvTable panels("T,seed,quantum_abs_mean,quantum_abs_std,classical_abs_mean,classical_abs_std");
  for (std::size_t i = 0; i < n_panels; ++i) {
    const auto& pt = points[i];
    const std::string stem = "panels/T" + tag(pt.temperature);
    ctx.write_series(stem + "_quantum.csv", pt.quantum);
    ctx.write_json(stem + "_quantum_jumps.json", pt.jumps);
    ctx.write_series(stem + "_classical.csv", pt.classical);
    panels.row(num(pt.temperature), pt.seed, num(pt.quantum_abs.mean), num(pt.quantum_abs.stddev),
               num(pt.classical_abs.mean), num(pt.classical_abs.stddev));
    ctx.record_run({{"kind", "panel"}, {"T", pt.temperature}, {"seed", pt.seed}});
  }
  ctx.write_text("panels.csv", panels.str());

  CsvTable sweep("T,seed,master_abs_mean,quantum_abs_mean,quantum_abs_std,classical_abs_mean,classical_abs_std,"
                 "combined_error,agree");
  for (std::size_t i = n_panels; i < points.size(); ++i) {
    const auto& pt = points[i];
    const double err = std::hypot(pt.quantum_abs.stddev, pt.classical_abs.stddev);
    const bool agree = std::abs(pt.quantum_abs.mean - pt.classical_abs.mean) <= err;
    sweep.row(num(pt.temperature), pt.seed, with_master ? num(pt.master_abs) : std::string("nan"),
              num(pt.quantum_abs.mean), num(pt.quantum_abs.stddev), num(pt.classical_abs.mean),
              num(pt.classical_abs.stddev), num(err), agree ? 1 : 0);
    ctx.record_run({{"kind", "sweep"}, {"T", pt.temperature}, {"seed", pt.seed}});
  }
  ctx.write_text("sweep.csv", sweep.str());
}

// ---------------------------------------------------------------------------

void cmd_trajectory_panels(RunContext& ctx) {
  const auto& cfg = ctx.config();
  struct Cell {
    int n, p;
    double omega, temperature;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : cfg.integers("N")) {
    require(n >= 2, "N must be >= 2");
    if (n > kMaxTrajectoryQubits)
      ctx.warn("N=" + std::to_string(n) + " exceeds the trajectory reach of 12 qubits");
    for (int p : cfg.integers("P"))
      for (double omega : cfg.numbers("Omega"))
        for (double t : cfg.numbers("T")) cells.push_back({n, p, omega, t, realization_seed(ctx.seed(), cells.size(), 0)});
  }

  struct Output {
    ObservableSeries series{"t", {}};
    json jumps;
    std::vector<Histogram> histograms;
  };
  std::vector<Output> outputs(cells.size());
  parallel_for(cells.size(), ctx.workers(), [&](std::size_t i) {
    const Cell& c = cells[i];
    const PatternSet patterns = generate_patterns(c.n, c.p, c.seed, cfg.boolean("balanced_first"));
    const ModelSpec model = make_model(patterns, c.omega, c.temperature, cfg.number("min_temperature"));
    std::vector<NamedObservable> obs;
    for (int mu = 0; mu < c.p; ++mu) {
      obs.push_back({"m_z" + std::to_string(mu + 1), overlap_operator(patterns.pattern(mu), Axis::z, mu).op});
    }
    const TrajectoryConfig tc = trajectory_config(cfg, "trajectory", dynamics_seed(c.seed));
    auto traj = run_trajectory(PureState::basis(c.n, patterns.basis_index(0)), model, tc, obs);
    for (int mu = 0; mu < c.p; ++mu) outputs[i].histograms.push_back(histogram(traj.series.column(static_cast<std::size_t>(mu)), c.n));
    outputs[i].jumps = traj.sidecar();
    outputs[i].series = std::move(traj.series);
  });

  CsvTable summary("N,P,Omega,T,seed,jump_count,mean_abs_m_z1,var_m_z1,extreme_bin_mass_m_z1");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const auto& out = outputs[i];
    const std::string dir = "cells/N" + std::to_string(c.n) + "_P" + std::to_string(c.p) + "_Omega" + tag(c.omega) +
                            "_T" + tag(c.temperature) + "/";
    ctx.write_series(dir + "series.csv", out.series);
    ctx.write_json(dir + "jumps.json", out.jumps);
    for (int mu = 0; mu < c.p; ++mu) {
      ctx.write_text(dir + "hist_m_z" + std::to_string(mu + 1) + ".csv", to_csv(out.histograms[static_cast<std::size_t>(mu)]));
    }
    const auto& m1 = out.series.column("m_z1");
    const SampleStats abs_stats = abs_time_average(m1, 0.0);
    const SampleStats stats = sample_stats(m1);
    const auto& h = out.histograms.front();
    summary.row(c.n, c.p, num(c.omega), num(c.temperature), c.seed, out.jumps["jump_count"].get<long long>(),
                num(abs_stats.mean), num(stats.stddev * stats.stddev), num(h.probability.front() + h.probability.back()));
    ctx.record_run({{"N", c.n}, {"P", c.p}, {"Omega", c.omega}, {"T", c.temperature}, {"seed", c.seed}});
  }
  ctx.write_text("cells.csv", summary.str());
}

// ---------------------------------------------------------------------------

namespace {

json fit_json(const DecayScan& scan) {
  json sizes = json::array();
  for (std::size_t i = 0; i < scan.fits.size(); ++i) {
    json f = to_json(scan.fits[i]);
    f["N"] = scan.envelopes[i].num_qubits;
    sizes.push_back(f);
  }
  return {{"sizes", sizes},
          {"skipped", scan.skipped},
          {"delta", scan.has_delta ? to_json(scan.delta) : json(nullptr)}};
}

}  // namespace

void cmd_damping_scan(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const auto sizes = cfg.integers("N");
  const int p = cfg.integers("P").front();
  const double omega = cfg.numbers("Omega").front();
  const double temperature = cfg.numbers("T").front();
  const bool balanced = cfg.boolean("balanced_first");
  const double min_t = cfg.number("min_temperature");
  for (int n : sizes) check_master_size(ctx, n);
  const int phase_n = static_cast<int>(cfg.integer("phase_N"));
  check_master_size(ctx, phase_n);

  struct Job {
    std::string phase;
    int n;
    double omega, temperature, dt, t_max;
    int record_every;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int n : sizes) {
    jobs.push_back({"", n, omega, temperature, cfg.number("integrator/dt"), cfg.number("integrator/t_max"),
                    static_cast<int>(cfg.integer("integrator/record_every")), realization_seed(ctx.seed(), jobs.size(), 0)});
  }
  for (const auto& [name, ph] : cfg.at("phases").items()) {
    const std::string base = "phases/" + name;
    jobs.push_back({name, phase_n, cfg.number(base + "/Omega"), cfg.number(base + "/T"), cfg.number(base + "/dt"),
                    cfg.number(base + "/t_max"), static_cast<int>(cfg.integer(base + "/record_every")),
                    realization_seed(ctx.seed(), jobs.size(), 0)});
  }
  std::vector<DampingRun> runs(jobs.size(), DampingRun{0, 0.0, 0.0, ObservableSeries("t", {})});
  parallel_for(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const PatternSet patterns = generate_patterns(j.n, p, j.seed, balanced);
    runs[i] = damping_run(patterns, j.omega, j.temperature, j.dt, j.t_max, j.record_every, min_t);
  });

  // Size scan: envelopes, decay constants, delta and collapse spread.
  const std::span<const DampingRun> size_runs(runs.data(), sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ctx.write_series("sizes/damping_N" + std::to_string(sizes[i]) + ".csv", runs[i].series);
    ctx.record_run({{"kind", "size"}, {"N", sizes[i]}, {"seed", jobs[i].seed}});
  }
  const DecayScan scan = decay_scan(size_runs);
  for (const auto& s : scan.skipped) ctx.warn("omitted from fits: " + s);
  for (const auto& e : scan.envelopes) {
    ctx.write_text("sizes/envelope_N" + std::to_string(e.num_qubits) + ".csv", to_csv(e.envelope));
  }
  json fits = fit_json(scan);
  fits["Omega"] = omega;
  fits["T"] = temperature;
  std::vector<double> deltas = cfg.numbers("collapse_deltas");
  if (scan.has_delta) deltas.push_back(scan.delta.b);
  json collapse = json::array();
  for (double d : deltas) {
    json entry{{"delta", d}, {"spread", nullptr}};
    if (!scan.envelopes.empty()) {
      try {
        entry["spread"] = collapse_check(scan.envelopes, d);
      } catch (const UsageError& e) {
        ctx.warn(std::string("collapse check: ") + e.what());
      }
    }
    collapse.push_back(entry);
  }
  fits["collapse"] = collapse;
  ctx.write_json("decay_fits.json", fits);

  // Phase points.
  json phases = json::object();
  for (std::size_t i = sizes.size(); i < jobs.size(); ++i) {
    const Job& j = jobs[i];
    const auto& series = runs[i].series;
    ctx.write_series("phases/" + j.phase + ".csv", series);
    const auto& t = series.times();
    const auto& m = series.column("m_z1");
    const auto& am = series.column("abs_m_z1");
    double max_after_10 = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] > 10.0) max_after_10 = std::max(max_after_10, std::abs(m[k]));
    }
    const auto late = static_cast<std::size_t>(std::floor((1.0 - kLateWindow) * static_cast<double>(t.size())));
    const SampleStats late_abs = sample_stats(std::span<const double>(am).subspan(late));
    phases[j.phase] = {{"N", j.n},
                       {"Omega", j.omega},
                       {"T", j.temperature},
                       {"seed", j.seed},
                       {"alternating_extrema", alternating_extrema(m, 0.05)},
                       {"m_initial", m.front()},
                       {"m_final", m.back()},
                       {"abs_m_final", am.back()},
                       {"late_abs_m_mean", late_abs.mean},
                       {"max_abs_m_after_t10", max_after_10}};
    ctx.record_run({{"kind", "phase"}, {"phase", j.phase}, {"N", j.n}, {"seed", j.seed}});
  }
  ctx.write_json("phases.json", phases);

  // Averaging over growing trajectory batches.
  if (cfg.boolean("trajectory_demo/enabled")) {
    const int n = static_cast<int>(cfg.integer("trajectory_demo/N"));
    require(n >= 2 && n <= kMaxTrajectoryQubits, "trajectory_demo/N must be in [2, 12]");
    const std::uint64_t seed = realization_seed(ctx.seed(), jobs.size(), 0);
    const PatternSet patterns = generate_patterns(n, p, seed, balanced);
    const ModelSpec model = make_model(patterns, cfg.number("trajectory_demo/Omega"), cfg.number("trajectory_demo/T"), min_t);
    const HopfieldGenerator generator(model);
    const auto obs = pattern_overlaps(patterns, false);
    const auto psi0 = PureState::basis(n, patterns.basis_index(0, -1));
    json demo{{"N", n}, {"seed", seed}, {"n_traj", json::array()}, {"late_amplitude", json::array()}};
    const auto counts = cfg.integers("trajectory_demo/n_traj");
    for (std::size_t b = 0; b < counts.size(); ++b) {
      require(counts[b] >= 1, "trajectory_demo/n_traj entries must be >= 1");
      TrajectoryConfig tc = trajectory_config(cfg, "trajectory_demo", realization_seed(ctx.seed(), jobs.size(), b + 1));
      tc.n_traj = counts[b];
      tc.workers = ctx.workers();
      const BatchSeries batch = run_batch(psi0, generator, tc, obs);
      ctx.write_text("trajectory_demo/batch_n" + std::to_string(counts[b]) + ".csv", to_csv(batch));
      demo["n_traj"].push_back(counts[b]);
      demo["late_amplitude"].push_back(late_amplitude(batch.mean_of("m_z1"), kLateWindow));
      ctx.record_run({{"kind", "trajectory_batch"}, {"n_traj", counts[b]}, {"seed", tc.seed}});
    }
    ctx.write_json("trajectory_demo.json", demo);
  }
}

// ---------------------------------------------------------------------------

namespace {

IterativeMode parse_mode(const std::string& name) {
  if (name == "automatic") return IterativeMode::automatic;
  if (name == "direct") return IterativeMode::direct;
  if (name == "semigroup") return IterativeMode::semigroup;
  throw UsageError("spectrum mode must be automatic, direct or semigroup, got '" + name + "'");
}

}  // namespace

void cmd_gap_scan(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const auto sizes = cfg.integers("N");
  const int p = cfg.integers("P").front();
  const double omega = cfg.numbers("Omega").front();
  const double temperature = cfg.numbers("T").front();
  const bool balanced = cfg.boolean("balanced_first");
  const double min_t = cfg.number("min_temperature");

  SpectrumOptions opts;
  opts.k = static_cast<int>(cfg.integer("spectrum/k"));
  opts.dense_max_qubits = static_cast<int>(cfg.integer("spectrum/dense_max_N"));
  opts.mode = parse_mode(cfg.string("spectrum/mode"));
  opts.tau = cfg.number("spectrum/tau");
  opts.residual_tol = cfg.number("spectrum/residual_tol");
  opts.arnoldi.max_restarts = static_cast<int>(cfg.integer("spectrum/max_restarts"));
  const std::string method = cfg.string("spectrum/method");
  require(method == "auto" || method == "dense" || method == "iterative",
          "spectrum/method must be auto, dense or iterative, got '" + method + "'");
  require(opts.k >= 2, "spectrum/k must be >= 2");
  for (int n : sizes) {
    require(n >= 2 && n <= kDefaultLiouvillianMaxQubits,
            "gap-scan sizes must be in [2, " + std::to_string(kDefaultLiouvillianMaxQubits) + "]");
  }

  std::vector<SpectrumReport> reports(sizes.size());
  parallel_for(sizes.size(), ctx.workers(), [&](std::size_t i) {
    const int n = sizes[i];
    const std::uint64_t seed = realization_seed(ctx.seed(), i, 0);
    SpectrumOptions o = opts;
    o.method = method == "dense" || (method == "auto" && n <= opts.dense_max_qubits) ? SpectrumMethod::dense
                                                                                     : SpectrumMethod::iterative;
    o.arnoldi.seed = dynamics_seed(seed);
    reports[i] = spectrum(make_model(generate_patterns(n, p, seed, balanced), omega, temperature, min_t), o);
  });

  CsvTable gaps("N,inv_N,gap,osc_freq");
  std::vector<double> inv_n, gap;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto& r = reports[i];
    ctx.write_json("spectra/spectrum_N" + std::to_string(sizes[i]) + ".json", r.to_json());
    const OscillationGap g = oscillation_gap(r);
    gaps.row(sizes[i], num(1.0 / sizes[i]), num(g.gap), num(g.frequency));
    inv_n.push_back(1.0 / sizes[i]);
    gap.push_back(g.gap);
    ctx.record_run({{"kind", "spectrum"}, {"N", sizes[i]}, {"seed", r.seed}, {"solver", r.solver}});
  }
  ctx.write_text("gaps.csv", gaps.str());
  json fits{{"power_law", nullptr}, {"log_linear", nullptr}, {"fixed_exponent", nullptr}};
  if (sizes.size() >= 3) {
    fits["power_law"] = to_json(fit_power_law(inv_n, gap));
    fits["log_linear"] = to_json(fit_log_linear(inv_n, gap));
    fits["fixed_exponent"] = to_json(fit_power_law_fixed_exponent(inv_n, gap, cfg.number("fixed_exponent")));
  } else {
    ctx.warn("gap fits need at least 3 sizes");
  }
  ctx.write_json("gap_fits.json", fits);

  if (!cfg.boolean("delta_scan/enabled")) return;
  const auto scan_sizes = cfg.integers("delta_scan/sizes");
  for (int n : scan_sizes) check_master_size(ctx, n);
  struct Point {
    std::string sweep;
    double omega, temperature;
  };
  std::vector<Point> points;
  for (double om : cfg.numbers("delta_scan/Omega_for_T_sweep"))
    for (double t : cfg.numbers("delta_scan/T_values")) points.push_back({"T", om, t});
  for (double t : cfg.numbers("delta_scan/T_for_Omega_sweep"))
    for (double om : cfg.numbers("delta_scan/Omega_values")) points.push_back({"Omega", om, t});

  const double dt = cfg.number("delta_scan/dt");
  const double t_max = cfg.number("delta_scan/t_max");
  const int record_every = static_cast<int>(cfg.integer("delta_scan/record_every"));
  const std::size_t n_sizes = scan_sizes.size();
  std::vector<DampingRun> runs(points.size() * n_sizes, DampingRun{0, 0.0, 0.0, ObservableSeries("t", {})});
  parallel_for(runs.size(), ctx.workers(), [&](std::size_t i) {
    const Point& pt = points[i / n_sizes];
    const std::size_t s = i % n_sizes;
    const std::uint64_t seed = realization_seed(ctx.seed(), sizes.size() + i / n_sizes, s);
    runs[i] = damping_run(generate_patterns(scan_sizes[s], p, seed, balanced), pt.omega, pt.temperature, dt, t_max,
                          record_every, min_t);
  });

  CsvTable table("sweep,Omega,T,delta,delta_rms,n_sizes");
  json details = json::array();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& pt = points[k];
    const DecayScan scan = decay_scan(std::span<const DampingRun>(runs.data() + k * n_sizes, n_sizes));
    if (!scan.has_delta) {
      ctx.warn("delta scan at Omega=" + tag(pt.omega) + ", T=" + tag(pt.temperature) +
               ": fewer than 3 sizes oscillate");
    }
    table.row(pt.sweep, num(pt.omega), num(pt.temperature), scan.has_delta ? num(scan.delta.b) : std::string("nan"),
              scan.has_delta ? num(scan.delta.rms) : std::string("nan"), scan.fits.size());
    json d = fit_json(scan);
    d["sweep"] = pt.sweep;
    d["Omega"] = pt.omega;
    d["T"] = pt.temperature;
    details.push_back(d);
  }
  ctx.write_text("delta_scan.csv", table.str());
  ctx.write_json("delta_scan.json", details);
}

// ---------------------------------------------------------------------------

namespace {

struct CapacityPoint {
  std::string map;
  int p;
  double omega, temperature;
};

struct CapacityRealization {
  std::uint64_t seed;
  std::size_t job;
  bool reused;
};

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + num(values[i]);
  return out;
}

}  // namespace

void cmd_capacity_map(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const int n = cfg.integers("N").front();
  check_master_size(ctx, n);
  const int n_real = static_cast<int>(cfg.integer("n_realizations"));
  const bool balanced = cfg.boolean("balanced_first");
  const bool reuse = cfg.boolean("reuse_equivalent_patterns");
  const double min_t = cfg.number("min_temperature");
  CapacityIntegration integ;
  integ.dt = cfg.number("integrator/dt");
  integ.t_max = cfg.number("integrator/t_max");
  integ.steady_tol = cfg.number("integrator/steady_tol");
  integ.stability_cap = cfg.boolean("integrator/stability_cap");
  require(integ.dt > 0.0 && integ.t_max >= integ.dt, "integrator needs 0 < dt <= t_max");

  std::vector<CapacityPoint> points;
  if (cfg.boolean("temperature_map/enabled")) {
    for (int p : cfg.integers("temperature_map/P"))
      for (double om : cfg.numbers("temperature_map/Omega"))
        for (double t : cfg.numbers("temperature_map/T")) points.push_back({"temperature_map", p, om, t});
  }
  if (cfg.boolean("pattern_map/enabled")) {
    const double t = cfg.number("pattern_map/T");
    for (int p : cfg.integers("pattern_map/P"))
      for (double om : cfg.numbers("pattern_map/Omega")) points.push_back({"pattern_map", p, om, t});
  }
  for (const auto& pt : points) require(pt.p >= 1, "P entries must be >= 1");

  // Distinct integrations; realizations with an equivalent pattern set at the
  // same (Omega, T) share one.
  struct Job {
    PatternSet patterns;
    double omega, temperature;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<CapacityRealization>> assign(points.size());
  std::map<std::string, std::size_t> seen;
  for (std::size_t g = 0; g < points.size(); ++g) {
    const auto& pt = points[g];
    for (int r = 0; r < n_real; ++r) {
      const std::uint64_t seed = realization_seed(ctx.seed(), g, static_cast<std::uint64_t>(r));
      PatternSet patterns = generate_patterns(n, pt.p, seed, balanced);
      std::size_t job = jobs.size();
      bool reused = false;
      if (reuse) {
        const std::string key = num(pt.omega) + "/" + num(pt.temperature) + "/" + canonical_pattern_key(patterns);
        const auto [it, inserted] = seen.emplace(key, jobs.size());
        job = it->second;
        reused = !inserted;
      }
      if (!reused) jobs.push_back({std::move(patterns), pt.omega, pt.temperature});
      assign[g].push_back({seed, job, reused});
    }
  }
  ctx.log() << "capacity-map: " << points.size() << " grid points, " << jobs.size() << " distinct integrations\n";

  std::vector<CapacitySample> samples(jobs.size());
  std::mutex log_mutex;
  std::size_t done = 0;
  parallel_for(jobs.size(), ctx.workers(), [&](std::size_t i) {
    const Job& j = jobs[i];
    samples[i] = capacity_sample(j.patterns, j.omega, j.temperature, integ, min_t);
    std::lock_guard lock(log_mutex);
    if (++done % 50 == 0) ctx.log() << "capacity-map: " << done << "/" << jobs.size() << "\n";
  });

  for (const std::string map : {"temperature_map", "pattern_map"}) {
    CsvTable summary("P,Omega,T,n_realizations,mean_abs_m1,stderr_abs_m1,mean_max_abs_m,stderr_max_abs_m,"
                     "max_mean_abs_m,n_non_converged");
    CsvTable raw("P,Omega,T,realization,seed,abs_m1,max_abs_m,abs_m_all,converged,time,dt,residual,reused");
    bool any = false;
    for (std::size_t g = 0; g < points.size(); ++g) {
      const auto& pt = points[g];
      if (pt.map != map) continue;
      any = true;
      std::vector<double> m1, mmax, mean_each(static_cast<std::size_t>(pt.p), 0.0);
      long long non_conv = 0;
      for (std::size_t r = 0; r < assign[g].size(); ++r) {
        const auto& a = assign[g][r];
        const auto& s = samples[a.job];
        m1.push_back(s.abs_overlaps.front());
        mmax.push_back(s.max_abs_overlap);
        for (std::size_t mu = 0; mu < mean_each.size(); ++mu) mean_each[mu] += s.abs_overlaps[mu] / n_real;
        if (!s.converged) ++non_conv;
        raw.row(pt.p, num(pt.omega), num(pt.temperature), r, a.seed, num(s.abs_overlaps.front()),
                num(s.max_abs_overlap), join(s.abs_overlaps), s.converged ? 1 : 0, num(s.time), num(s.dt),
                num(s.residual), a.reused ? 1 : 0);
      }
      const SampleStats s1 = sample_stats(m1);
      const SampleStats sm = sample_stats(mmax);
      const double se = std::sqrt(static_cast<double>(n_real));
      summary.row(pt.p, num(pt.omega), num(pt.temperature), n_real, num(s1.mean), num(s1.stddev / se), num(sm.mean),
                  num(sm.stddev / se), num(*std::max_element(mean_each.begin(), mean_each.end())), non_conv);
      ctx.count_non_converged(non_conv);
    }
    if (!any) continue;
    ctx.write_text(map + ".csv", summary.str());
    ctx.write_text(map + "_raw.csv", raw.str());
  }
  ctx.record_run({{"kind", "capacity"},
                  {"grid_points", points.size()},
                  {"realizations_per_point", n_real},
                  {"distinct_integrations", jobs.size()},
                  {"seed_rule", "realization_seed(master, grid_point, realization)"}});
}

}  // namespace qhop
