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

#include "qhopfield/classical.hpp"

#include <cmath>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

#include "qhopfield/errors.hpp"
#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

SpinConfig::SpinConfig(std::vector<int> spins) : s_(std::move(spins)) {
  require(!s_.empty(), "spin configuration must not be empty");
  for (int v : s_) require(v == 1 || v == -1, "spin entries must be -1 or +1");
}

SpinConfig SpinConfig::from_basis_index(std::uint64_t index, int num_spins) {
  require(num_spins >= 1 && num_spins <= 63, "spin count out of range");
  std::vector<int> s(static_cast<std::size_t>(num_spins));
  for (int i = 0; i < num_spins; ++i) s[static_cast<std::size_t>(i)] = spin_at(index, i, num_spins);
  return SpinConfig(std::move(s));
}

void SpinConfig::set(int i, int value) {
  require(value == 1 || value == -1, "spin entries must be -1 or +1");
  s_.at(static_cast<std::size_t>(i)) = value;
}

std::uint64_t SpinConfig::basis_index() const {
  std::uint64_t index = 0;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (s_[static_cast<std::size_t>(i)] < 0) index |= site_mask(i, n);
  }
  return index;
}

namespace {

double field(const std::vector<int>& s, const Eigen::MatrixXd& w, int i) {
  double h = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) h += w(i, static_cast<Index>(j)) * s[j];
  return h;
}

void sweep_in_place(std::vector<int>& s, const Eigen::MatrixXd& w, double beta, Rng& rng,
                    UpdateOrder order, std::vector<int>& sites) {
  const int n = static_cast<int>(s.size());
  if (order == UpdateOrder::random) {
    for (int k = n - 1; k > 0; --k) {
      std::swap(sites[static_cast<std::size_t>(k)],
                sites[uniform_index(rng, static_cast<std::uint64_t>(k) + 1)]);
    }
  }
  for (int k = 0; k < n; ++k) {
    const int i = order == UpdateOrder::random ? sites[static_cast<std::size_t>(k)] : k;
    const double g = gamma_plus(beta, field(s, w, i));
    s[static_cast<std::size_t>(i)] = uniform_open01(rng) < g * g ? 1 : -1;
  }
}

std::vector<int> identity_order(int n) {
  std::vector<int> sites(static_cast<std::size_t>(n));
  std::iota(sites.begin(), sites.end(), 0);
  return sites;
}

}  // namespace

SpinConfig glauber_sweep(SpinConfig config, const WeightMatrix& weights, double beta, Rng& rng,
                         UpdateOrder order) {
  require(weights.size() == config.size(), "configuration and weight sizes differ");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  std::vector<int> s = config.spins();
  std::vector<int> sites = identity_order(config.size());
  sweep_in_place(s, weights.matrix(), beta, rng, order, sites);
  return SpinConfig(std::move(s));
}

double classical_overlap(const SpinConfig& config, std::span<const int> pattern) {
  require(static_cast<int>(pattern.size()) == config.size(), "pattern and configuration sizes differ");
  double m = 0.0;
  for (int i = 0; i < config.size(); ++i) m += pattern[static_cast<std::size_t>(i)] * config[i];
  return m / config.size();
}

ObservableSeries run_mcs(const SpinConfig& config0, const WeightMatrix& weights, double beta,
                         long long n_mcs, std::uint64_t seed, std::span<const int> pattern,
                         UpdateOrder order) {
  require(n_mcs >= 1, "n_mcs must be >= 1");
  require(weights.size() == config0.size(), "configuration and weight sizes differ");
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(static_cast<int>(pattern.size()) == config0.size(), "pattern and configuration sizes differ");
  Rng rng(seed);
  std::vector<int> s = config0.spins();
  std::vector<int> sites = identity_order(config0.size());
  ObservableSeries series("mcs", {"m_z"});
  const double inv_n = 1.0 / config0.size();
  for (long long k = 1; k <= n_mcs; ++k) {
    sweep_in_place(s, weights.matrix(), beta, rng, order, sites);
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) m += pattern[i] * s[i];
    const double value = m * inv_n;
    series.append(static_cast<double>(k), std::span<const double>(&value, 1));
  }
  return series;
}

Eigen::MatrixXd classical_master_matrix(const WeightMatrix& weights, double beta) {
  const int n = weights.size();
  require(n >= 1 && n <= kMaxClassicalMasterSpins,
          "classical master matrix supports at most " + std::to_string(kMaxClassicalMasterSpins) + " spins");
  require(std::isfinite(beta) && beta > 0.0, "beta must be finite and > 0");
  const Index dim = hilbert_dim(n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd h = local_field_values(i, weights);
    const auto m = static_cast<Index>(site_mask(i, n));
    for (Index c = 0; c < dim; ++c) {
      const bool down = (c & m) != 0;
      const double g = down ? gamma_plus(beta, h[c]) : gamma_minus(beta, h[c]);
      const double rate = g * g;
      q(c ^ m, c) += rate;
      q(c, c) -= rate;
    }
  }
  return q;
}

Eigen::VectorXd propagate_classical(const Eigen::MatrixXd& generator, const Eigen::VectorXd& p0,
                                    double t) {
  require(generator.rows() == generator.cols() && generator.rows() == p0.size(),
          "generator and distribution sizes differ");
  require(std::isfinite(t) && t >= 0.0, "propagation time must be >= 0");
  const Eigen::MatrixXd step = (generator * t).exp();
  return step * p0;
}

}  // namespace qhop
