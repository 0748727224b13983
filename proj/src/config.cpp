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

#include "qhopfield/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qhopfield/errors.hpp"

namespace qhop {

namespace {

using nlohmann::json;

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) {
    const double e = std::log10(lo) + (std::log10(hi) - std::log10(lo)) * k / (n - 1);
    // Round to 6 significant digits so that the echoed config stays readable.
    const double x = std::pow(10.0, e);
    std::ostringstream os;
    os.precision(6);
    os << x;
    v.push_back(std::stod(os.str()));
  }
  return v;
}

std::vector<double> lin_space(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) {
    std::ostringstream os;
    os.precision(6);
    os << lo + (hi - lo) * k / (n - 1);
    v.push_back(std::stod(os.str()));
  }
  return v;
}

json common_defaults(std::string_view name) {
  return {{"experiment", std::string(name)},
          {"seed", 1},
          {"workers", 1},
          {"output_dir", "out/" + std::string(name)},
          {"n_realizations", 1},
          {"min_temperature", 1e-4}};
}

json integrator(double dt, double t_max, int record_every) {
  return {{"dt", dt}, {"t_max", t_max}, {"record_every", record_every}, {"steady_tol", 1e-7}};
}

json trajectory(double dt, double t_max, int record_every, int n_traj) {
  return {{"dt", dt}, {"t_max", t_max}, {"record_every", record_every}, {"n_traj", n_traj}};
}

json classical_compare_defaults() {
  json d = common_defaults("classical-compare");
  d["N"] = {10};
  d["P"] = {1};
  d["Omega"] = {0.0};
  d["T"] = {1.0, 0.5, 0.3, 0.1, 0.05};
  d["balanced_first"] = true;
  d["n_mcs"] = 4000;
  d["burn_in_fraction"] = 0.1;
  d["sweep_T"] = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2, 1.5};
  d["master_steady_state"] = true;
  d["integrator"] = integrator(0.05, 400.0, 20);
  d["trajectory"] = trajectory(0.01, 4000.0, 100, 1);
  return d;
}

json trajectory_panels_defaults() {
  json d = common_defaults("trajectory-panels");
  d["N"] = {12};
  d["P"] = {1, 5, 10};
  d["Omega"] = {0.1, 0.2, 0.5, 1.0, 2.0};
  d["T"] = {0.005};
  d["balanced_first"] = false;
  d["trajectory"] = trajectory(0.01, 4000.0, 10, 1);
  return d;
}

json phase(double omega, double t, double t_max, double dt) {
  return {{"Omega", omega}, {"T", t}, {"t_max", t_max}, {"dt", dt}, {"record_every", 1}};
}

json damping_scan_defaults() {
  json d = common_defaults("damping-scan");
  d["N"] = {4, 6, 8, 10};
  d["P"] = {1};
  d["Omega"] = {5.0};
  d["T"] = {0.2};
  d["balanced_first"] = true;
  d["integrator"] = integrator(0.01, 30.0, 1);
  d["collapse_deltas"] = {0.5, 0.75, 1.0};
  d["phase_N"] = 10;
  d["phases"] = {{"LC", phase(5.0, 0.2, 40.0, 0.01)},
                 {"PM", phase(1.0, 2.0, 40.0, 0.02)},
                 {"FM", phase(0.1, 0.1, 100.0, 0.05)}};
  d["trajectory_demo"] = {{"enabled", true},
                          {"N", 8},
                          {"Omega", 5.0},
                          {"T", 0.2},
                          {"n_traj", {1, 10, 100, 1000}},
                          {"dt", 0.01},
                          {"t_max", 20.0},
                          {"record_every", 1}};
  return d;
}

json gap_scan_defaults() {
  json d = common_defaults("gap-scan");
  d["N"] = {3, 4, 5, 6, 7};
  d["P"] = {1};
  d["Omega"] = {5.0};
  d["T"] = {0.2};
  d["balanced_first"] = false;
  d["fixed_exponent"] = 0.75;
  d["spectrum"] = {{"method", "auto"},
                   {"k", 6},
                   {"dense_max_N", 5},
                   {"mode", "automatic"},
                   {"tau", 0.1},
                   {"residual_tol", 1e-8},
                   {"max_restarts", 500}};
  d["delta_scan"] = {{"enabled", true},
                     {"sizes", {4, 6, 8}},
                     {"T_values", {0.1, 0.2, 0.3, 0.5, 0.7, 1.0}},
                     {"Omega_for_T_sweep", {5.0, 1.0}},
                     {"Omega_values", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0}},
                     {"T_for_Omega_sweep", {0.2, 1.0}},
                     {"dt", 0.01},
                     {"t_max", 30.0},
                     {"record_every", 1}};
  return d;
}

json capacity_map_defaults() {
  json d = common_defaults("capacity-map");
  d["N"] = {8};
  d["n_realizations"] = 50;
  d["balanced_first"] = true;
  d["integrator"] = {{"dt", 0.25}, {"t_max", 400.0}, {"steady_tol", 1e-7}, {"stability_cap", true}};
  d["temperature_map"] = {{"enabled", true},
                          {"P", {1, 2, 3, 4, 5, 6}},
                          {"Omega", log_space(1e-2, 10.0, 21)},
                          {"T", lin_space(0.005, 1.5, 21)}};
  d["pattern_map"] = {{"enabled", true},
                      {"T", 0.005},
                      {"P", {1, 2, 3, 4, 5, 6, 7, 8}},
                      {"Omega", log_space(1e-2, 10.0, 21)}};
  d["reuse_equivalent_patterns"] = true;
  return d;
}

const char* type_name(const json& v) {
  if (v.is_boolean()) return "boolean";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

bool same_kind(const json& def, const json& v) {
  if (def.is_number()) return v.is_number() && !v.is_boolean();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_object()) return v.is_object();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    for (const auto& e : v) {
      if (!e.is_number() || e.is_boolean()) return false;
    }
    return true;
  }
  return false;
}

void merge(json& target, const json& user, const std::string& prefix) {
  if (!user.is_object()) throw UsageError("config " + (prefix.empty() ? "document" : "'" + prefix + "'") + " must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "/" + it.key();
    if (!target.contains(it.key())) {
      std::string nearest;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      for (auto d = target.begin(); d != target.end(); ++d) {
        const std::size_t dist = edit_distance(it.key(), d.key());
        if (dist < best) {
          best = dist;
          nearest = d.key();
        }
      }
      std::string msg = "unknown config key '" + path + "'";
      if (!nearest.empty()) msg += "; did you mean '" + (prefix.empty() ? nearest : prefix + "/" + nearest) + "'?";
      throw UsageError(msg);
    }
    json& slot = target[it.key()];
    if (!same_kind(slot, it.value())) {
      throw UsageError("config key '" + path + "' must be " +
                       (slot.is_array() ? std::string("an array of numbers") : std::string("a ") + type_name(slot)) +
                       ", got " + type_name(it.value()));
    }
    if (slot.is_object()) {
      merge(slot, it.value(), path);
    } else {
      slot = it.value();
    }
  }
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = path.find('/', start);
    parts.emplace_back(path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

void require_nonempty_lists(const json& node, const std::string& prefix) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "/" + it.key();
    if (it->is_array()) require(!it->empty(), "config key '" + path + "' must be a nonempty list");
    if (it->is_object()) require_nonempty_lists(*it, path);
  }
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"classical-compare", "trajectory-panels", "damping-scan",
                                              "gap-scan", "capacity-map"};
  return names;
}

json default_config(std::string_view experiment) {
  if (experiment == "classical-compare") return classical_compare_defaults();
  if (experiment == "trajectory-panels") return trajectory_panels_defaults();
  if (experiment == "damping-scan") return damping_scan_defaults();
  if (experiment == "gap-scan") return gap_scan_defaults();
  if (experiment == "capacity-map") return capacity_map_defaults();
  throw UsageError("unknown experiment '" + std::string(experiment) + "'");
}

ExperimentConfig::ExperimentConfig(std::string experiment, json resolved)
    : experiment_(std::move(experiment)), values_(std::move(resolved)) {}

const json& ExperimentConfig::at(std::string_view path) const {
  const json* node = &values_;
  for (const auto& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) throw UsageError("config has no key '" + std::string(path) + "'");
    node = &(*node)[part];
  }
  return *node;
}

double ExperimentConfig::number(std::string_view path) const {
  const json& v = at(path);
  require(v.is_number(), "config key '" + std::string(path) + "' must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), "config key '" + std::string(path) + "' must be finite");
  return x;
}

long long ExperimentConfig::integer(std::string_view path) const {
  const double x = number(path);
  require(x == std::floor(x) && std::abs(x) < 9e15, "config key '" + std::string(path) + "' must be an integer");
  return static_cast<long long>(x);
}

std::uint64_t ExperimentConfig::unsigned_integer(std::string_view path) const {
  const json& v = at(path);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const long long x = integer(path);
  require(x >= 0, "config key '" + std::string(path) + "' must be non-negative");
  return static_cast<std::uint64_t>(x);
}

bool ExperimentConfig::boolean(std::string_view path) const {
  const json& v = at(path);
  require(v.is_boolean(), "config key '" + std::string(path) + "' must be a boolean");
  return v.get<bool>();
}

std::string ExperimentConfig::string(std::string_view path) const {
  const json& v = at(path);
  require(v.is_string(), "config key '" + std::string(path) + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> ExperimentConfig::numbers(std::string_view path) const {
  const json& v = at(path);
  require(v.is_array() && !v.empty(), "config key '" + std::string(path) + "' must be a nonempty array");
  std::vector<double> out;
  for (const auto& e : v) {
    require(e.is_number() && std::isfinite(e.get<double>()),
            "config key '" + std::string(path) + "' must contain finite numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> ExperimentConfig::integers(std::string_view path) const {
  std::vector<int> out;
  for (double x : numbers(path)) {
    require(x == std::floor(x) && std::abs(x) < 1e9, "config key '" + std::string(path) + "' must contain integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

void ExperimentConfig::set(std::string_view path, json value) {
  json* node = &values_;
  const auto parts = split_path(path);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = std::move(value);
}

ExperimentConfig resolve_config(std::string_view experiment, const json& user) {
  json resolved = default_config(experiment);
  if (user.is_object() && user.contains("experiment")) {
    require(user["experiment"].is_string() && user["experiment"].get<std::string>() == experiment,
            "config 'experiment' is '" + user["experiment"].dump() + "' but the subcommand is '" +
                std::string(experiment) + "'");
  }
  merge(resolved, user, "");
  require_nonempty_lists(resolved, "");
  ExperimentConfig cfg(std::string(experiment), std::move(resolved));
  require(cfg.integer("n_realizations") >= 1, "config 'n_realizations' must be >= 1");
  require(cfg.integer("workers") >= 1, "config 'workers' must be >= 1");
  require(cfg.number("min_temperature") > 0.0, "config 'min_temperature' must be > 0");
  cfg.unsigned_integer("seed");
  return cfg;
}

ExperimentConfig parse_config(const std::string& path, std::string_view experiment) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json user;
  try {
    user = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed config file '" + path + "': " + e.what());
  }
  return resolve_config(experiment, user);
}

}  // namespace qhop
