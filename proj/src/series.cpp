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

#include "qhopfield/series.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "qhopfield/errors.hpp"

namespace qhop {

ObservableSeries::ObservableSeries(std::string time_label, std::vector<std::string> names)
    : time_label_(std::move(time_label)), names_(std::move(names)), columns_(names_.size()) {}

void ObservableSeries::append(double t, std::span<const double> values) {
  require(values.size() == names_.size(), "observable count mismatch when appending a sample");
  times_.push_back(t);
  for (std::size_t k = 0; k < values.size(); ++k) columns_[k].push_back(values[k]);
}

const std::vector<double>& ObservableSeries::column(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  require(it != names_.end(), "series has no observable named '" + name + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void ObservableSeries::write_csv(std::ostream& os) const {
  os << time_label_;
  for (const auto& n : names_) os << ',' << n;
  os << '\n';
  for (std::size_t r = 0; r < times_.size(); ++r) {
    os << format_double(times_[r]);
    for (const auto& c : columns_) os << ',' << format_double(c[r]);
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const ObservableSeries& series) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  series.write_csv(out);
}

}  // namespace qhop
