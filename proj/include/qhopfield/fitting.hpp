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

#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "qhopfield/observables.hpp"

namespace qhop {

/// y = a * x^b fitted by least squares on (log x, log y).
struct PowerLawFit {
  double a;
  double b;
  /// Root-mean-square residual in log y.
  double rms;
  int n_points;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// y = a * x^exponent with only a fitted (least squares in log y).
PowerLawFit fit_power_law_fixed_exponent(std::span<const double> x, std::span<const double> y, double exponent);

/// y = a + b * log(x) by ordinary least squares; rms in y.
struct LogLinearFit {
  double a;
  double b;
  double rms;
  int n_points;
};

LogLinearFit fit_log_linear(std::span<const double> x, std::span<const double> y);

/// peak = A exp(-t / tau) fitted on (t, log peak).
struct DecayFit {
  double tau;
  double amplitude;
  double rms;
  int n_points;
};

DecayFit fit_decay_constant(const EnvelopePoints& envelope);

/// {a, b, rms, n_points}
nlohmann::json to_json(const PowerLawFit& fit);
nlohmann::json to_json(const LogLinearFit& fit);
/// {a, tau, rms, n_points}
nlohmann::json to_json(const DecayFit& fit);

struct SizedEnvelope {
  int num_qubits;
  EnvelopePoints envelope;
};

/// Rescales each envelope's time axis by N^-delta and returns the largest
/// difference between any two curves, interpolated linearly in log(peak),
/// over the time window common to all curves (sampled at every rescaled
/// peak time inside it). Throws UsageError when the window is empty.
double collapse_check(std::span<const SizedEnvelope> curves, double delta);

}  // namespace qhop
