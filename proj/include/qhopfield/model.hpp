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

// Dissipative quantum Hopfield model: stored patterns, Hebbian couplings,
// local-field operators, thermal jump operators and the transverse-field
// Hamiltonian H = Omega * sum_i sigma_i^x.

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "qhopfield/tensor_algebra.hpp"

namespace qhop {

/// P stored patterns of N entries in {-1, +1}.
class PatternSet {
 public:
  /// Validates every entry; balanced_first requires an even N and exactly
  /// N/2 positive entries in the first pattern.
  PatternSet(Eigen::MatrixXi xi, std::uint64_t seed, bool balanced_first);

  int num_neurons() const { return static_cast<int>(xi_.cols()); }
  int num_patterns() const { return static_cast<int>(xi_.rows()); }
  std::uint64_t seed() const { return seed_; }
  bool balanced_first() const { return balanced_first_; }
  const Eigen::MatrixXi& matrix() const { return xi_; }
  /// Pattern mu (0-based) as a contiguous copy.
  std::vector<int> pattern(int mu) const;
  /// Basis index of the configuration sigma_i^z = sign * xi_i^mu.
  std::uint64_t basis_index(int mu, int sign = 1) const;

  friend bool operator==(const PatternSet&, const PatternSet&);

 private:
  Eigen::MatrixXi xi_;
  std::uint64_t seed_;
  bool balanced_first_;
};

PatternSet generate_patterns(int num_neurons, int num_patterns, std::uint64_t seed,
                             bool balanced_first);

nlohmann::json to_json(const PatternSet& patterns);
PatternSet pattern_set_from_json(const nlohmann::json& doc);

/// Symmetric coupling matrix with zero diagonal.
class WeightMatrix {
 public:
  explicit WeightMatrix(Eigen::MatrixXd omega);
  int size() const { return static_cast<int>(omega_.rows()); }
  double operator()(int i, int j) const { return omega_(i, j); }
  const Eigen::MatrixXd& matrix() const { return omega_; }

 private:
  Eigen::MatrixXd omega_;
};

/// omega_ij = (1/N) sum_mu xi_i^mu xi_j^mu for i != j, omega_ii = 0.
WeightMatrix hebb_weights(const PatternSet& patterns);

inline constexpr double kDefaultMinTemperature = 1e-4;

struct ModelSpec {
  PatternSet patterns;
  WeightMatrix weights;
  double omega;
  double temperature;

  int num_qubits() const { return patterns.num_neurons(); }
  double beta() const { return 1.0 / temperature; }
};

/// Validates Omega >= 0 and T >= min_temperature (T = 0 has no valid
/// thermal jump operators) and computes the Hebb weights.
ModelSpec make_model(PatternSet patterns, double omega, double temperature,
                     double min_temperature = kDefaultMinTemperature);

/// Thermal amplitudes gamma_+-(d) = exp(+-beta d / 2) / sqrt(2 cosh(beta d)),
/// evaluated as 1 / sqrt(1 + exp(-+2 beta d)) so that large beta|d| never
/// overflows.
double gamma_plus(double beta, double local_field);
double gamma_minus(double beta, double local_field);

/// Local field sum_{j != i} omega_ij s_j for every basis configuration.
Eigen::VectorXd local_field_values(int site, const WeightMatrix& weights);

/// Diagonal operator Delta E_i = sum_{j != i} omega_ij sigma_j^z.
QuantumOperator local_field_operator(int site, const WeightMatrix& weights);

/// Jump operators in channel order L_{0+}, L_{0-}, L_{1+}, L_{1-}, ...
/// with L_{i+-} = Gamma_{i+-} sigma_i^{+-}.
std::vector<QuantumOperator> jump_operators(const WeightMatrix& weights, double beta);

/// Omega * sum_i sigma_i^x.
QuantumOperator hamiltonian(double omega, int num_qubits);

}  // namespace qhop
