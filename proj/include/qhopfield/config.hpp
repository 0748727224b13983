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
#include <string>
#include <string_view>
#include <vector>

namespace qhop {

/// Experiment configuration: the defaults of the chosen experiment with the
/// user's values merged in. Parsing is strict: every key must exist in the
/// defaults and keep its JSON type, so the resolved document always lists
/// every effective value.
class ExperimentConfig {
 public:
  ExperimentConfig(std::string experiment, nlohmann::json resolved);

  const std::string& experiment() const { return experiment_; }
  const nlohmann::json& resolved() const { return values_; }

  /// Value at a '/'-separated path such as "integrator/dt".
  const nlohmann::json& at(std::string_view path) const;
  double number(std::string_view path) const;
  long long integer(std::string_view path) const;
  std::uint64_t unsigned_integer(std::string_view path) const;
  bool boolean(std::string_view path) const;
  std::string string(std::string_view path) const;
  std::vector<double> numbers(std::string_view path) const;
  std::vector<int> integers(std::string_view path) const;

  void set(std::string_view path, nlohmann::json value);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  std::string experiment_;
  nlohmann::json values_;
};

const std::vector<std::string>& experiment_names();

/// Default document of an experiment; throws UsageError for unknown names.
nlohmann::json default_config(std::string_view experiment);

/// Merges `user` into the defaults of `experiment`. Unknown keys are
/// reported together with the nearest valid key at the same level.
ExperimentConfig resolve_config(std::string_view experiment, const nlohmann::json& user);

/// Reads and resolves a JSON file. The file's optional "experiment" key must
/// match `experiment`.
ExperimentConfig parse_config(const std::string& path, std::string_view experiment);

/// Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace qhop
