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
#include <vector>

#include "qhopfield/series.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

enum class Axis { x, y, z };

Axis parse_axis(std::string_view name);
char axis_name(Axis axis);

struct OverlapOperator {
  int pattern_index;
  Axis axis;
  QuantumOperator op;
};

/// m^mu_axis = (1/N) sum_i xi_i sigma_i^axis.
OverlapOperator overlap_operator(std::span<const int> pattern, Axis axis, int pattern_index = 0);

/// Largest N for which |A| is built by dense eigendecomposition (x, y axes).
inline constexpr int kMaxAbsOverlapDenseQubits = 6;

/// |A| = sqrt(A^dagger A) for A = overlap_operator(pattern, axis).
QuantumOperator abs_overlap_operator(std::span<const int> pattern, Axis axis);

/// Probability mass on the N + 1 attainable z-overlap values
/// -1, -1 + 2/N, ..., 1 (bins extend half a spacing on either side).
struct Histogram {
  std::vector<double> centers;
  std::vector<double> probability;

  /// Header `bin_center,probability`.
  void write_csv(std::ostream& os) const;
};

Histogram histogram(std::span<const double> samples, int num_qubits);

struct EnvelopePoints {
  std::vector<double> t;
  std::vector<double> peak;

  std::size_t size() const { return t.size(); }
  /// Header `t_peak,peak_value`.
  void write_csv(std::ostream& os) const;
};

/// Minimum samples per oscillation period accepted by peak_envelope.
inline constexpr double kMinSamplesPerPeriod = 20.0;

/// One maximum per cycle of an oscillating series: the series is split at
/// upward zero crossings of its mean-subtracted values, and within each
/// complete cycle the largest sample is refined by a parabola through it and
/// its neighbours. Throws UsageError with fewer than 3 cycles or with fewer
/// than kMinSamplesPerPeriod samples per cycle.
EnvelopePoints peak_envelope(std::span<const double> t, std::span<const double> values);
EnvelopePoints peak_envelope(const ObservableSeries& series, const std::string& column);

}  // namespace qhop
