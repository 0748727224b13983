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

#include "qhopfield/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "qhopfield/errors.hpp"

namespace qhop {

namespace {

struct Line {
  double intercept;
  double slope;
  double rms;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit needs at least two distinct abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  return {intercept, slope, std::sqrt(ss / n)};
}

void check_points(std::span<const double> x, std::span<const double> y, std::size_t min_points) {
  require(x.size() == y.size(), "fit abscissa and ordinate lengths differ");
  require(x.size() >= min_points, "fit needs at least " + std::to_string(min_points) + " points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(std::isfinite(x[i]) && std::isfinite(y[i]), "fit points must be finite");
  }
}

std::vector<double> logs(std::span<const double> v, const char* what) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double value : v) {
    require(value > 0.0, std::string(what) + " values must be strictly positive");
    out.push_back(std::log(value));
  }
  return out;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  check_points(x, y, 3);
  const Line l = least_squares(logs(x, "power-law x"), logs(y, "power-law y"));
  return {std::exp(l.intercept), l.slope, l.rms, static_cast<int>(x.size())};
}

PowerLawFit fit_power_law_fixed_exponent(std::span<const double> x, std::span<const double> y, double exponent) {
  check_points(x, y, 1);
  const auto lx = logs(x, "power-law x");
  const auto ly = logs(y, "power-law y");
  const double n = static_cast<double>(lx.size());
  double log_a = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) log_a += (ly[i] - exponent * lx[i]) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - log_a - exponent * lx[i];
    ss += r * r;
  }
  return {std::exp(log_a), exponent, std::sqrt(ss / n), static_cast<int>(x.size())};
}

LogLinearFit fit_log_linear(std::span<const double> x, std::span<const double> y) {
  check_points(x, y, 3);
  const Line l = least_squares(logs(x, "log-linear x"), y);
  return {l.intercept, l.slope, l.rms, static_cast<int>(x.size())};
}

DecayFit fit_decay_constant(const EnvelopePoints& envelope) {
  check_points(envelope.t, envelope.peak, 3);
  const Line l = least_squares(envelope.t, logs(envelope.peak, "envelope peak"));
  require(l.slope < 0.0, "envelope does not decay (non-negative log slope)");
  return {-1.0 / l.slope, std::exp(l.intercept), l.rms, static_cast<int>(envelope.size())};
}

nlohmann::json to_json(const PowerLawFit& fit) {
  return {{"a", fit.a}, {"b", fit.b}, {"rms", fit.rms}, {"n_points", fit.n_points}};
}

nlohmann::json to_json(const LogLinearFit& fit) {
  return {{"a", fit.a}, {"b", fit.b}, {"rms", fit.rms}, {"n_points", fit.n_points}};
}

nlohmann::json to_json(const DecayFit& fit) {
  return {{"a", fit.amplitude}, {"tau", fit.tau}, {"rms", fit.rms}, {"n_points", fit.n_points}};
}

namespace {

double interpolate_log(const std::vector<double>& t, const std::vector<double>& logp, double x) {
  auto it = std::upper_bound(t.begin(), t.end(), x);
  if (it == t.begin()) return logp.front();
  if (it == t.end()) return logp.back();
  const auto j = static_cast<std::size_t>(it - t.begin());
  const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - w) * logp[j - 1] + w * logp[j];
}

}  // namespace

double collapse_check(std::span<const SizedEnvelope> curves, double delta) {
  require(!curves.empty(), "collapse_check needs at least one curve");
  require(std::isfinite(delta), "collapse exponent must be finite");
  std::vector<std::vector<double>> ts, ps;
  double lo = -INFINITY, hi = INFINITY;
  for (const auto& c : curves) {
    require(c.num_qubits >= 1, "collapse_check sizes must be positive");
    require(c.envelope.size() >= 1, "collapse_check envelopes must not be empty");
    const double scale = std::pow(static_cast<double>(c.num_qubits), -delta);
    std::vector<double> t, p;
    for (std::size_t k = 0; k < c.envelope.size(); ++k) {
      t.push_back(c.envelope.t[k] * scale);
      p.push_back(std::log(c.envelope.peak[k]));
      require(c.envelope.peak[k] > 0.0, "collapse_check peaks must be positive");
    }
    lo = std::max(lo, t.front());
    hi = std::min(hi, t.back());
    ts.push_back(std::move(t));
    ps.push_back(std::move(p));
  }
  if (curves.size() == 1) return 0.0;
  if (!(lo <= hi)) throw UsageError("collapse_check: rescaled curves share no common time window");
  std::vector<double> grid{lo, hi};
  for (const auto& t : ts) {
    for (double x : t) {
      if (x > lo && x < hi) grid.push_back(x);
    }
  }
  double spread = 0.0;
  for (double x : grid) {
    double vmin = INFINITY, vmax = -INFINITY;
    for (std::size_t c = 0; c < ts.size(); ++c) {
      const double v = std::exp(interpolate_log(ts[c], ps[c], x));
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    spread = std::max(spread, vmax - vmin);
  }
  return spread;
}

}  // namespace qhop
