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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

struct NamedObservable {
  std::string name;
  QuantumOperator op;
};

/// Time grid plus one column of values per named observable.
class ObservableSeries {
 public:
  ObservableSeries(std::string time_label, std::vector<std::string> names);

  void append(double t, std::span<const double> values);

  const std::string& time_label() const { return time_label_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& column(std::size_t k) const { return columns_.at(k); }
  /// Column by observable name; throws UsageError for unknown names.
  const std::vector<double>& column(const std::string& name) const;

  /// Header `<time_label>,<obs1>,...`; values with 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  std::string time_label_;
  std::vector<std::string> names_;
  std::vector<double> times_;
  std::vector<std::vector<double>> columns_;
};

/// Shortest round-trip-exact rendering is not needed; CSV values always use
/// 17 significant digits so reruns are byte-identical.
std::string format_double(double value);

void write_csv_file(const std::string& path, const ObservableSeries& series);

}  // namespace qhop
