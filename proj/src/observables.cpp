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

#include "qhopfield/observables.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "qhopfield/errors.hpp"

namespace qhop {

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw UsageError("unknown axis '" + std::string(name) + "' (expected x, y or z)");
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

namespace {

void check_pattern(std::span<const int> pattern) {
  require(!pattern.empty() && static_cast<int>(pattern.size()) <= kMaxQubits, "pattern length out of range");
  for (int v : pattern) require(v == 1 || v == -1, "pattern entries must be -1 or +1");
}

Eigen::VectorXd z_overlap_diagonal(std::span<const int> pattern) {
  const int n = static_cast<int>(pattern.size());
  const Index dim = hilbert_dim(n);
  Eigen::VectorXd d(dim);
  for (Index c = 0; c < dim; ++c) {
    int m = 0;
    for (int i = 0; i < n; ++i) m += pattern[static_cast<std::size_t>(i)] * spin_at(static_cast<std::uint64_t>(c), i, n);
    d[c] = static_cast<double>(m) / n;
  }
  return d;
}

}  // namespace

OverlapOperator overlap_operator(std::span<const int> pattern, Axis axis, int pattern_index) {
  check_pattern(pattern);
  const int n = static_cast<int>(pattern.size());
  if (axis == Axis::z) {
    return {pattern_index, axis, QuantumOperator::diagonal(n, z_overlap_diagonal(pattern))};
  }
  const Eigen::Matrix2cd s = pauli(axis == Axis::x ? PauliKind::x : PauliKind::y);
  QuantumOperator sum = QuantumOperator::zero(n);
  for (int i = 0; i < n; ++i) {
    sum = sum + static_cast<double>(pattern[static_cast<std::size_t>(i)]) * embed(s, i, n);
  }
  return {pattern_index, axis, (1.0 / n) * sum};
}

QuantumOperator abs_overlap_operator(std::span<const int> pattern, Axis axis) {
  check_pattern(pattern);
  const int n = static_cast<int>(pattern.size());
  if (axis == Axis::z) {
    return QuantumOperator::diagonal(n, Eigen::VectorXd(z_overlap_diagonal(pattern).cwiseAbs()));
  }
  require(n <= kMaxAbsOverlapDenseQubits,
          "|m_" + std::string(1, axis_name(axis)) + "| needs a dense eigendecomposition; at most " +
              std::to_string(kMaxAbsOverlapDenseQubits) + " qubits supported");
  const DenseMatrix a = overlap_operator(pattern, axis).op.to_dense();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  const DenseMatrix& v = es.eigenvectors();
  DenseMatrix abs = v * es.eigenvalues().cwiseAbs().cast<Complex>().asDiagonal() * v.adjoint();
  abs = 0.5 * (abs + abs.adjoint()).eval();
  return QuantumOperator(n, std::move(abs));
}

void Histogram::write_csv(std::ostream& os) const {
  os << "bin_center,probability\n";
  for (std::size_t k = 0; k < centers.size(); ++k) {
    os << format_double(centers[k]) << ',' << format_double(probability[k]) << '\n';
  }
}

Histogram histogram(std::span<const double> samples, int num_qubits) {
  require(num_qubits >= 1, "histogram needs N >= 1");
  require(!samples.empty(), "histogram needs at least one sample");
  constexpr double kSlack = 1e-9;
  const int bins = num_qubits + 1;
  Histogram h;
  h.probability.assign(static_cast<std::size_t>(bins), 0.0);
  for (int k = 0; k < bins; ++k) h.centers.push_back(-1.0 + 2.0 * k / num_qubits);
  std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    require(std::isfinite(x) && x >= -1.0 - kSlack && x <= 1.0 + kSlack,
            "histogram samples must lie in [-1, 1]");
    const double pos = (x + 1.0) * num_qubits / 2.0;
    const int k = std::clamp(static_cast<int>(std::floor(pos + 0.5)), 0, bins - 1);
    ++counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < bins; ++k) {
    h.probability[static_cast<std::size_t>(k)] =
        static_cast<double>(counts[static_cast<std::size_t>(k)]) / static_cast<double>(samples.size());
  }
  return h;
}

void EnvelopePoints::write_csv(std::ostream& os) const {
  os << "t_peak,peak_value\n";
  for (std::size_t k = 0; k < t.size(); ++k) os << format_double(t[k]) << ',' << format_double(peak[k]) << '\n';
}

EnvelopePoints peak_envelope(std::span<const double> t, std::span<const double> values) {
  require(t.size() == values.size(), "time and value lengths differ");
  const std::size_t n = t.size();
  require(n >= 3, "peak_envelope needs at least 3 samples");
  for (std::size_t i = 1; i < n; ++i) require(t[i] > t[i - 1], "times must be strictly increasing");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

  std::vector<std::size_t> ups;  // first index at or above the mean after a sample below it
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i - 1] - mean < 0.0 && values[i] - mean >= 0.0) ups.push_back(i);
  }
  const std::size_t cycles = ups.size() < 2 ? 0 : ups.size() - 1;
  if (cycles < 3) {
    throw UsageError("peak_envelope found " + std::to_string(cycles) +
                     " complete oscillation cycles; at least 3 are required");
  }
  EnvelopePoints env;
  for (std::size_t c = 0; c + 1 < ups.size(); ++c) {
    const std::size_t a = ups[c], b = ups[c + 1];
    if (static_cast<double>(b - a) < kMinSamplesPerPeriod) {
      throw UsageError("oscillation sampled with " + std::to_string(b - a) + " points per period; at least " +
                       std::to_string(static_cast<int>(kMinSamplesPerPeriod)) + " are required");
    }
    std::size_t k = a;
    for (std::size_t i = a; i < b; ++i) {
      if (values[i] > values[k]) k = i;
    }
    double tp = t[k], vp = values[k];
    if (k > 0 && k + 1 < n) {
      const double y0 = values[k - 1], y1 = values[k], y2 = values[k + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      const double h0 = t[k] - t[k - 1], h1 = t[k + 1] - t[k];
      if (denom < 0.0 && std::abs(h0 - h1) <= 1e-9 * h1) {
        const double off = 0.5 * (y0 - y2) / denom;
        tp = t[k] + off * h1;
        vp = y1 - 0.25 * (y0 - y2) * off;
      }
    }
    if (!env.t.empty() && tp <= env.t.back()) continue;
    env.t.push_back(tp);
    env.peak.push_back(vp);
  }
  if (env.size() < 3) throw UsageError("peak_envelope found fewer than 3 distinct cycle maxima");
  return env;
}

EnvelopePoints peak_envelope(const ObservableSeries& series, const std::string& column) {
  return peak_envelope(series.times(), series.column(column));
}

}  // namespace qhop
