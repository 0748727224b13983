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

#include "qhopfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qhopfield/errors.hpp"
#include "qhopfield/random.hpp"

namespace qhop {

PatternSet::PatternSet(Eigen::MatrixXi xi, std::uint64_t seed, bool balanced_first)
    : xi_(std::move(xi)), seed_(seed), balanced_first_(balanced_first) {
  require(xi_.rows() >= 1 && xi_.cols() >= 1, "pattern set needs P >= 1 and N >= 1");
  require(xi_.cols() <= kMaxQubits, "pattern length exceeds the supported qubit count");
  require((xi_.array().abs() == 1).all(), "pattern entries must be -1 or +1");
  if (balanced_first_) {
    require(xi_.cols() % 2 == 0, "balanced first pattern requires an even N");
    require((xi_.row(0).array() == 1).count() == xi_.cols() / 2,
            "balanced first pattern must have exactly N/2 entries equal to +1");
  }
}

std::vector<int> PatternSet::pattern(int mu) const {
  require(mu >= 0 && mu < num_patterns(), "pattern index out of range");
  std::vector<int> out(static_cast<std::size_t>(num_neurons()));
  for (int i = 0; i < num_neurons(); ++i) out[static_cast<std::size_t>(i)] = xi_(mu, i);
  return out;
}

std::uint64_t PatternSet::basis_index(int mu, int sign) const {
  require(mu >= 0 && mu < num_patterns(), "pattern index out of range");
  std::uint64_t index = 0;
  const int n = num_neurons();
  for (int i = 0; i < n; ++i) {
    if (sign * xi_(mu, i) < 0) index |= site_mask(i, n);
  }
  return index;
}

bool operator==(const PatternSet& a, const PatternSet& b) {
  return a.seed_ == b.seed_ && a.balanced_first_ == b.balanced_first_ &&
         a.xi_.rows() == b.xi_.rows() && a.xi_.cols() == b.xi_.cols() && a.xi_ == b.xi_;
}

PatternSet generate_patterns(int num_neurons, int num_patterns, std::uint64_t seed,
                             bool balanced_first) {
  require(num_neurons >= 1, "N must be >= 1");
  require(num_patterns >= 1, "P must be >= 1");
  require(!balanced_first || num_neurons % 2 == 0, "balanced first pattern requires an even N");
  Rng rng(seed);
  Eigen::MatrixXi xi(num_patterns, num_neurons);
  int first_random = 0;
  if (balanced_first) {
    // Fisher-Yates shuffle of N/2 ones and N/2 minus-ones.
    std::vector<int> row(static_cast<std::size_t>(num_neurons));
    for (int i = 0; i < num_neurons; ++i) row[static_cast<std::size_t>(i)] = i < num_neurons / 2 ? 1 : -1;
    for (int i = num_neurons - 1; i > 0; --i) {
      const auto j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(i + 1)));
      std::swap(row[static_cast<std::size_t>(i)], row[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < num_neurons; ++i) xi(0, i) = row[static_cast<std::size_t>(i)];
    first_random = 1;
  }
  for (int mu = first_random; mu < num_patterns; ++mu) {
    for (int i = 0; i < num_neurons; ++i) xi(mu, i) = (rng() >> 63) ? 1 : -1;
  }
  return PatternSet(std::move(xi), seed, balanced_first);
}

nlohmann::json to_json(const PatternSet& patterns) {
  nlohmann::json rows = nlohmann::json::array();
  for (int mu = 0; mu < patterns.num_patterns(); ++mu) rows.push_back(patterns.pattern(mu));
  return {{"N", patterns.num_neurons()},
          {"P", patterns.num_patterns()},
          {"seed", patterns.seed()},
          {"balanced_first", patterns.balanced_first()},
          {"xi", rows}};
}

PatternSet pattern_set_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("N").get<int>();
    const int p = doc.at("P").get<int>();
    const auto rows = doc.at("xi").get<std::vector<std::vector<int>>>();
    require(static_cast<int>(rows.size()) == p, "pattern JSON: xi has " +
                                                    std::to_string(rows.size()) +
                                                    " rows but P = " + std::to_string(p));
    Eigen::MatrixXi xi(p, n);
    for (int mu = 0; mu < p; ++mu) {
      require(static_cast<int>(rows[static_cast<std::size_t>(mu)].size()) == n,
              "pattern JSON: row length differs from N");
      for (int i = 0; i < n; ++i) xi(mu, i) = rows[static_cast<std::size_t>(mu)][static_cast<std::size_t>(i)];
    }
    return PatternSet(std::move(xi), doc.at("seed").get<std::uint64_t>(),
                      doc.at("balanced_first").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed pattern JSON: ") + e.what());
  }
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd omega) : omega_(std::move(omega)) {
  require(omega_.rows() == omega_.cols(), "weight matrix must be square");
  require((omega_ - omega_.transpose()).cwiseAbs().maxCoeff() == 0.0, "weight matrix must be symmetric");
  require(omega_.diagonal().cwiseAbs().maxCoeff() == 0.0, "weight matrix must have zero diagonal");
}

WeightMatrix hebb_weights(const PatternSet& patterns) {
  const Eigen::MatrixXd xi = patterns.matrix().cast<double>();
  Eigen::MatrixXd omega = (xi.transpose() * xi) / static_cast<double>(patterns.num_neurons());
  omega.diagonal().setZero();
  return WeightMatrix(std::move(omega));
}

ModelSpec make_model(PatternSet patterns, double omega, double temperature, double min_temperature) {
  require(std::isfinite(omega) && omega >= 0.0, "Omega must be finite and >= 0");
  require(std::isfinite(temperature) && temperature > 0.0,
          "temperature must be > 0 (T = 0 has no valid thermal jump operators)");
  require(temperature >= min_temperature,
          "temperature " + std::to_string(temperature) + " is below the supported floor " +
              std::to_string(min_temperature));
  WeightMatrix weights = hebb_weights(patterns);
  return ModelSpec{std::move(patterns), std::move(weights), omega, temperature};
}

double gamma_plus(double beta, double local_field) {
  return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * beta * local_field));
}

double gamma_minus(double beta, double local_field) {
  return 1.0 / std::sqrt(1.0 + std::exp(2.0 * beta * local_field));
}

Eigen::VectorXd local_field_values(int site, const WeightMatrix& weights) {
  const int n = weights.size();
  require(site >= 0 && site < n, "site " + std::to_string(site) + " out of range");
  const Index d = hilbert_dim(n);
  Eigen::VectorXd field(d);
  for (Index a = 0; a < d; ++a) {
    double h = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != site) h += weights(site, j) * spin_at(static_cast<std::uint64_t>(a), j, n);
    }
    field[a] = h;
  }
  return field;
}

QuantumOperator local_field_operator(int site, const WeightMatrix& weights) {
  return QuantumOperator::diagonal(weights.size(), local_field_values(site, weights));
}

std::vector<QuantumOperator> jump_operators(const WeightMatrix& weights, double beta) {
  require(std::isfinite(beta) && beta > 0.0, "beta must be finite and > 0");
  const int n = weights.size();
  std::vector<QuantumOperator> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd field = local_field_values(i, weights);
    const Eigen::VectorXd gp = field.unaryExpr([beta](double h) { return gamma_plus(beta, h); });
    const Eigen::VectorXd gm = field.unaryExpr([beta](double h) { return gamma_minus(beta, h); });
    out.push_back(QuantumOperator::diagonal(n, gp) * embed(pauli(PauliKind::plus), i, n));
    out.push_back(QuantumOperator::diagonal(n, gm) * embed(pauli(PauliKind::minus), i, n));
  }
  return out;
}

QuantumOperator hamiltonian(double omega, int num_qubits) {
  require(omega >= 0.0, "Omega must be >= 0");
  QuantumOperator h = QuantumOperator::zero(num_qubits);
  if (omega == 0.0) return h;
  for (int i = 0; i < num_qubits; ++i) h = h + embed(pauli(PauliKind::x), i, num_qubits);
  return omega * h;
}

}  // namespace qhop
