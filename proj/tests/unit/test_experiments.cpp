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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "qhopfield/classical.hpp"
#include "qhopfield/config.hpp"
#include "qhopfield/errors.hpp"
#include "qhopfield/experiments.hpp"

using namespace qhop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qhopfield_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Runs an experiment into `dir` with the given worker count.
void run(const std::string& name, json user, const fs::path& dir, int workers) {
  user["output_dir"] = dir.string();
  user["workers"] = workers;
  std::ostringstream log;
  run_experiment(resolve_config(name, user), log);
}

void check_same_outputs(const fs::path& a, const fs::path& b) {
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (rel == "metadata.json" || rel == "resolved_config.json") continue;
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel), rel.string());
    ++compared;
  }
  CHECK(compared > 0);
}

PatternSet patterns_of(std::initializer_list<std::initializer_list<int>> rows) {
  Eigen::MatrixXi xi(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (int v : row) xi(r, c++) = v;
    ++r;
  }
  return PatternSet(xi, 0, false);
}

}  // namespace

TEST_CASE("config defaults are complete") {
  for (const auto& name : experiment_names()) {
    const auto cfg = resolve_config(name, json::object());
    CHECK(cfg.experiment() == name);
    CHECK(cfg.resolved() == default_config(name));
    CHECK(cfg.integer("n_realizations") >= 1);
    CHECK(cfg.unsigned_integer("seed") == 1);
  }
  const auto gap = resolve_config("gap-scan", json::object());
  CHECK(gap.integers("N") == std::vector<int>{3, 4, 5, 6, 7});
  CHECK(gap.number("spectrum/tau") == 0.1);
  const auto cap = resolve_config("capacity-map", json::object());
  CHECK(cap.integer("n_realizations") == 50);
  CHECK(cap.number("integrator/t_max") == 400.0);
  CHECK(cap.numbers("temperature_map/Omega").size() == 21);
  CHECK(cap.numbers("temperature_map/Omega").front() == doctest::Approx(0.01));
  CHECK(cap.numbers("temperature_map/Omega").back() == doctest::Approx(10.0));
  CHECK(cap.numbers("temperature_map/T").front() == doctest::Approx(0.005));
  CHECK(cap.numbers("temperature_map/T").back() == doctest::Approx(1.5));
  const auto cc = resolve_config("classical-compare", json::object());
  CHECK(cc.numbers("T") == std::vector<double>{1.0, 0.5, 0.3, 0.1, 0.05});
}

TEST_CASE("config parsing is strict") {
  try {
    resolve_config("gap-scan", json{{"omeag", 1.0}});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'omeag'") != std::string::npos);
    CHECK(msg.find("'Omega'") != std::string::npos);
  }
  try {
    resolve_config("gap-scan", json{{"spectrum", {{"tua", 0.2}}}});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("'spectrum/tau'") != std::string::npos);
  }
  CHECK_THROWS_AS(resolve_config("gap-scan", json{{"N", "seven"}}), UsageError);
  CHECK_THROWS_AS(resolve_config("gap-scan", json{{"N", json::array()}}), UsageError);
  CHECK_THROWS_AS(resolve_config("gap-scan", json{{"n_realizations", 0}}), UsageError);
  CHECK_THROWS_AS(resolve_config("gap-scan", json{{"experiment", "capacity-map"}}), UsageError);
  CHECK_THROWS_AS(resolve_config("gap-scan", json::array()), UsageError);
  CHECK_THROWS_AS(resolve_config("no-such-scan", json::object()), UsageError);
  CHECK_NOTHROW(resolve_config("gap-scan", json{{"experiment", "gap-scan"}}));
}

TEST_CASE("config files") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "broken.json") << "{\"N\": [3,";
    std::ofstream(dir / "ok.json") << R"({"N": [3, 4], "spectrum": {"k": 8}})";
  }
  CHECK_THROWS_AS(parse_config((dir / "broken.json").string(), "gap-scan"), UsageError);
  CHECK_THROWS_AS(parse_config((dir / "missing.json").string(), "gap-scan"), UsageError);
  const auto cfg = parse_config((dir / "ok.json").string(), "gap-scan");
  CHECK(cfg.integers("N") == std::vector<int>{3, 4});
  CHECK(cfg.integer("spectrum/k") == 8);
  CHECK(cfg.number("spectrum/tau") == 0.1);

  // The echoed resolved config parses back to the same configuration.
  std::ofstream(dir / "echo.json") << cfg.resolved().dump(2);
  CHECK(parse_config((dir / "echo.json").string(), "gap-scan") == cfg);
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("omeag", "Omega") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("seed", "seed") == 0);
}

TEST_CASE("sample statistics") {
  const std::vector<double> v{1.0, -2.0, 3.0, -4.0};
  const auto s = sample_stats(v);
  CHECK(s.mean == doctest::Approx(-0.5));
  CHECK(s.stddev == doctest::Approx(std::sqrt(((1.5 * 1.5) + (1.5 * 1.5) + (3.5 * 3.5) + (3.5 * 3.5)) / 3.0)));
  const auto a = abs_time_average(v, 0.5);
  CHECK(a.count == 2);
  CHECK(a.mean == doctest::Approx(3.5));
  CHECK(sample_stats(std::vector<double>{2.0}).stddev == 0.0);
  CHECK_THROWS_AS(sample_stats(std::vector<double>{}), UsageError);
}

TEST_CASE("alternating extrema and late amplitude") {
  std::vector<double> y;
  for (int k = 0; k <= 4000; ++k) {
    const double t = 0.01 * k;
    y.push_back(-std::exp(-t / 5.0) * std::cos(2.0 * t));
  }
  // Extrema of magnitude e^{-t/5} at t = k pi / 2; those >= 0.05 alternate.
  int expected = 0;
  for (int k = 1; k < 100; ++k)
    if (std::exp(-k * M_PI / 2.0 / 5.0) >= 0.05) ++expected;
  CHECK(alternating_extrema(y, 0.05) == expected);
  const std::vector<double> flat{0.1, 0.2, 0.3, 0.4};
  CHECK(alternating_extrema(flat, 0.0) == 0);

  CHECK(late_amplitude(y, 0.25) <= std::exp(-30.0 / 5.0) * 1.01);
  const std::vector<double> w{0.0, 5.0, -1.0, 2.0, -2.0};
  CHECK(late_amplitude(w, 0.4) == doctest::Approx(2.0));
  CHECK(late_amplitude(w, 1.0) == doctest::Approx(3.5));
}

TEST_CASE("seed derivation") {
  CHECK(realization_seed(1, 2, 3) == realization_seed(1, 2, 3));
  CHECK(realization_seed(1, 2, 3) != realization_seed(1, 3, 2));
  CHECK(realization_seed(1, 2, 3) != realization_seed(2, 2, 3));
  CHECK(dynamics_seed(5) != 5);
}

TEST_CASE("canonical pattern keys") {
  const auto a = patterns_of({{1, -1, 1, -1}, {1, 1, -1, -1}, {-1, 1, 1, 1}});
  // Gauge by the first pattern, flipped second pattern, permuted sites.
  const auto gauge = patterns_of({{-1, 1, -1, 1}, {-1, -1, 1, 1}, {1, -1, -1, -1}});
  const auto flipped = patterns_of({{1, -1, 1, -1}, {-1, -1, 1, 1}, {-1, 1, 1, 1}});
  const auto permuted = patterns_of({{-1, 1, 1, -1}, {1, 1, -1, -1}, {1, -1, 1, 1}});
  const auto key = canonical_pattern_key(a);
  CHECK(canonical_pattern_key(gauge) == key);
  CHECK(canonical_pattern_key(flipped) == key);
  CHECK(canonical_pattern_key(permuted) == key);
  // Exchanging the roles of patterns 1 and 2 is not a symmetry here.
  const auto swapped = patterns_of({{1, 1, -1, -1}, {1, -1, 1, -1}, {-1, 1, 1, 1}});
  const auto other = patterns_of({{1, -1, 1, -1}, {1, 1, 1, -1}, {-1, 1, 1, 1}});
  CHECK(canonical_pattern_key(other) != key);

  // The symmetry is exact for the dynamics: equal keys, equal results.
  CapacityIntegration integ;
  integ.dt = 0.05;
  integ.t_max = 6.0;
  for (const auto* p : {&gauge, &flipped, &permuted}) {
    const auto s0 = capacity_sample(a, 0.4, 0.3, integ);
    const auto s1 = capacity_sample(*p, 0.4, 0.3, integ);
    for (std::size_t mu = 0; mu < 3; ++mu) CHECK(std::abs(s0.abs_overlaps[mu] - s1.abs_overlaps[mu]) <= 1e-12);
  }
  const auto s_swapped = capacity_sample(swapped, 0.4, 0.3, integ);
  CHECK(s_swapped.abs_overlaps.size() == 3);
}

TEST_CASE("capacity sample") {
  const auto pats = generate_patterns(4, 2, 3, true);
  CapacityIntegration integ;
  integ.dt = 10.0;
  integ.t_max = 20.0;
  const auto s = capacity_sample(pats, 1.0, 0.5, integ);
  // The step is capped for stability and divides the horizon.
  CHECK(s.dt < 10.0);
  CHECK(std::abs(20.0 / s.dt - std::round(20.0 / s.dt)) <= 1e-9);
  CHECK(s.max_abs_overlap == std::max(s.abs_overlaps[0], s.abs_overlaps[1]));
  integ.stability_cap = false;
  CHECK_THROWS_AS(capacity_sample(pats, 1.0, 0.5, integ), NumericalError);
}

TEST_CASE("classical master steady overlap") {
  const auto pats = generate_patterns(6, 1, 2, true);
  const double t = 0.4;
  // Boltzmann weights of the Hopfield energy by enumeration.
  const auto w = hebb_weights(pats);
  const auto xi = pats.pattern(0);
  double z = 0.0, acc = 0.0;
  for (std::uint64_t k = 0; k < 64; ++k) {
    const auto s = SpinConfig::from_basis_index(k, 6);
    double e = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) e += w(i, j) * s[i] * s[j];
    const double b = std::exp(e / t);
    z += b;
    acc += b * std::abs(classical_overlap(s, xi));
  }
  CHECK(classical_master_abs_overlap(pats, t) == doctest::Approx(acc / z).epsilon(1e-10));
}

TEST_CASE("damping run and decay scan") {
  std::vector<DampingRun> runs;
  for (int n : {2, 3, 4}) runs.push_back(damping_run(generate_patterns(n, 1, 1, false), 5.0, 0.2, 0.01, 12.0, 1));
  CHECK(runs[0].series.column("m_z1").front() == doctest::Approx(-1.0));
  CHECK(runs[0].series.column("abs_m_z1").front() == doctest::Approx(1.0));
  const auto scan = decay_scan(runs);
  CHECK(scan.skipped.empty());
  REQUIRE(scan.has_delta);
  CHECK(scan.fits[2].tau > scan.fits[0].tau);

  // A non-oscillating run is skipped with a reason.
  runs.push_back(damping_run(generate_patterns(2, 1, 1, false), 0.05, 0.2, 0.05, 12.0, 1));
  const auto scan2 = decay_scan(runs);
  CHECK(scan2.skipped.size() == 1);
  CHECK(scan2.fits.size() == 3);
}

TEST_CASE("gap-scan outputs are deterministic across worker counts") {
  const json user{{"N", {2, 3, 4}}, {"delta_scan", {{"sizes", {2, 3, 4}},
                                                   {"T_values", {0.2}},
                                                   {"Omega_for_T_sweep", {5.0}},
                                                   {"Omega_values", {5.0}},
                                                   {"T_for_Omega_sweep", {0.3}},
                                                   {"t_max", 10.0}}}};
  const auto a = scratch("gap_a");
  const auto b = scratch("gap_b");
  run("gap-scan", user, a, 1);
  run("gap-scan", user, b, 3);
  check_same_outputs(a, b);
  for (const char* f : {"gaps.csv", "gap_fits.json", "delta_scan.csv", "metadata.json", "resolved_config.json",
                        "spectra/spectrum_N3.json"}) {
    CHECK_MESSAGE(fs::exists(a / f), f);
  }
  CHECK(slurp(a / "gaps.csv").rfind("N,inv_N,gap,osc_freq\n", 0) == 0);
  const auto meta = json::parse(slurp(a / "metadata.json"));
  for (const char* key : {"versions", "seed", "workers", "started_utc", "wall_seconds", "runs", "warnings"}) {
    CHECK(meta.contains(key));
  }
  const auto echoed = resolve_config("gap-scan", json::parse(slurp(a / "resolved_config.json")));
  CHECK(echoed.integers("N") == std::vector<int>{2, 3, 4});
}

TEST_CASE("capacity-map outputs are deterministic and reuse equivalent patterns") {
  const json user{{"N", {4}},
                  {"n_realizations", 4},
                  {"integrator", {{"t_max", 8.0}}},
                  {"temperature_map", {{"P", {1, 2}}, {"Omega", {0.1, 1.0}}, {"T", {0.2}}}},
                  {"pattern_map", {{"P", {1, 3}}, {"Omega", {0.3}}}}};
  const auto a = scratch("cap_a");
  const auto b = scratch("cap_b");
  run("capacity-map", user, a, 1);
  run("capacity-map", user, b, 2);
  check_same_outputs(a, b);

  json off = user;
  off["reuse_equivalent_patterns"] = false;
  const auto c = scratch("cap_c");
  run("capacity-map", off, c, 1);
  // Reuse changes the work done, not the values beyond rounding.
  auto same_table = [](const std::string& x, const std::string& y, bool drop_last) {
    std::istringstream ix(x), iy(y);
    std::string lx, ly;
    while (true) {
      const bool gx = static_cast<bool>(std::getline(ix, lx));
      const bool gy = static_cast<bool>(std::getline(iy, ly));
      if (gx != gy) return false;
      if (!gx) return true;
      std::vector<std::string> cx, cy;
      std::stringstream sx(lx), sy(ly);
      for (std::string c; std::getline(sx, c, ',');) cx.push_back(c);
      for (std::string c; std::getline(sy, c, ',');) cy.push_back(c);
      if (cx.size() != cy.size()) return false;
      for (std::size_t i = 0; i + (drop_last ? 1 : 0) < cx.size(); ++i) {
        if (cx[i] == cy[i]) continue;
        char* ex = nullptr;
        char* ey = nullptr;
        const double vx = std::strtod(cx[i].c_str(), &ex);
        const double vy = std::strtod(cy[i].c_str(), &ey);
        if (*ex != '\0' || *ey != '\0' || std::abs(vx - vy) > 1e-10 * std::max(1.0, std::abs(vx))) return false;
      }
    }
  };
  CHECK(same_table(slurp(a / "temperature_map.csv"), slurp(c / "temperature_map.csv"), false));
  CHECK(same_table(slurp(a / "pattern_map_raw.csv"), slurp(c / "pattern_map_raw.csv"), true));
  const auto meta = json::parse(slurp(a / "metadata.json"));
  CHECK(meta["non_converged"].get<long long>() >= 0);
  CHECK(meta["runs"][0]["distinct_integrations"].get<int>() < 4 * 6);
}

TEST_CASE("classical-compare and damping-scan smoke runs") {
  const json cc{{"N", {4}},
                {"T", {0.5}},
                {"sweep_T", {0.3, 1.0}},
                {"n_mcs", 200},
                {"trajectory", {{"t_max", 50.0}, {"record_every", 10}}}};
  const auto a = scratch("cc_a");
  const auto b = scratch("cc_b");
  run("classical-compare", cc, a, 1);
  run("classical-compare", cc, b, 2);
  check_same_outputs(a, b);
  CHECK(fs::exists(a / "panels/T0.5_quantum.csv"));
  CHECK(fs::exists(a / "panels/T0.5_classical.csv"));
  CHECK(slurp(a / "panels/T0.5_classical.csv").rfind("mcs,m_z\n", 0) == 0);
  CHECK(slurp(a / "sweep.csv").find("0.29999999999999999") != std::string::npos);

  const json ds{{"N", {2, 4, 6}},
                {"phase_N", 4},
                {"integrator", {{"t_max", 10.0}}},
                {"phases", {{"LC", {{"t_max", 5.0}}}, {"PM", {{"t_max", 5.0}}}, {"FM", {{"t_max", 5.0}}}}},
                {"trajectory_demo", {{"N", 4}, {"n_traj", {1, 5}}, {"t_max", 2.0}}}};
  const auto d = scratch("ds");
  run("damping-scan", ds, d, 2);
  for (const char* f : {"decay_fits.json", "phases.json", "trajectory_demo.json", "sizes/damping_N4.csv",
                        "sizes/envelope_N4.csv", "phases/LC.csv", "trajectory_demo/batch_n5.csv"}) {
    CHECK_MESSAGE(fs::exists(d / f), f);
  }
  const auto phases = json::parse(slurp(d / "phases.json"));
  CHECK(phases["LC"]["m_initial"].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("trajectory-panels smoke run") {
  const json tp{{"N", {4}}, {"P", {1, 2}}, {"Omega", {0.5}}, {"trajectory", {{"t_max", 20.0}}}};
  const auto a = scratch("tp");
  run("trajectory-panels", tp, a, 2);
  CHECK(fs::exists(a / "cells.csv"));
  CHECK(fs::exists(a / "cells/N4_P2_Omega0.5_T0.005/hist_m_z2.csv"));
  CHECK(fs::exists(a / "cells/N4_P2_Omega0.5_T0.005/jumps.json"));
}
