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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qhopfield/errors.hpp"
#include "qhopfield/model.hpp"
#include "qhopfield/observables.hpp"
#include "qhopfield/random.hpp"

using namespace qhop;

namespace {

const std::vector<int> kCaptionPattern{1, 1, 1, 1, 1, -1, -1, -1, -1, -1};

double binomial(int n, int k) { return std::round(std::tgamma(n + 1) / (std::tgamma(k + 1) * std::tgamma(n - k + 1))); }

std::vector<double> sampled(double dt, double t_max, auto&& f) {
  std::vector<double> out;
  const auto steps = static_cast<int>(std::llround(t_max / dt));
  for (int k = 0; k <= steps; ++k) out.push_back(f(k * dt));
  return out;
}

std::vector<double> grid(double dt, double t_max) {
  return sampled(dt, t_max, [](double t) { return t; });
}

}  // namespace

TEST_CASE("overlap operators") {
  const std::vector<int> ones(4, 1);
  const auto mz = overlap_operator(ones, Axis::z);
  CHECK(mz.axis == Axis::z);
  CHECK(hermitian_expectation(mz.op, PureState::basis(4, 0)) == doctest::Approx(1.0));

  const auto pats = generate_patterns(6, 2, 3, false);
  const auto xi = pats.pattern(1);
  const auto m = overlap_operator(xi, Axis::z, 1).op;
  CHECK(hermitian_expectation(m, PureState::basis(6, pats.basis_index(1))) == doctest::Approx(1.0));
  CHECK(hermitian_expectation(m, PureState::basis(6, pats.basis_index(1, -1))) == doctest::Approx(-1.0));
  for (Axis ax : {Axis::x, Axis::y}) {
    const auto o = overlap_operator(xi, ax).op;
    CHECK(std::abs(hermitian_expectation(o, PureState::basis(6, 13))) <= 1e-15);
    CHECK(o.hermiticity_error() <= 1e-15);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<DenseMatrix>(o.to_dense()).eigenvalues();
    CHECK(ev.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
  }

  // Diagonal entries lie on the N + 1 attainable values.
  const ComplexVector d = m.diagonal();
  for (Index i = 0; i < d.size(); ++i) {
    const double k = (d(i).real() + 1.0) * 6.0 / 2.0;
    CHECK(std::abs(k - std::round(k)) <= 1e-12);
  }
  CHECK(parse_axis("y") == Axis::y);
  CHECK(axis_name(Axis::x) == 'x');
  CHECK_THROWS_AS(parse_axis("q"), UsageError);
  CHECK_THROWS_AS(overlap_operator(std::vector<int>{1, 2}, Axis::z), UsageError);
}

TEST_CASE("absolute overlap operators") {
  const auto pats = generate_patterns(5, 1, 1, false);
  const auto xi = pats.pattern(0);
  const ComplexVector a = overlap_operator(xi, Axis::z).op.diagonal();
  const auto abs_z = abs_overlap_operator(xi, Axis::z);
  CHECK(abs_z.is_diagonal());
  CHECK((abs_z.diagonal() - a.cwiseAbs().cast<Complex>()).cwiseAbs().maxCoeff() <= 1e-15);
  for (int i = 0; i < 5; ++i) {
    const auto z = embed(pauli(PauliKind::z), i, 5);
    CHECK(max_abs_difference(abs_z * z, z * abs_z) <= 1e-15);
  }

  // |A| is PSD, squares to A^2 and is idempotent under |.|.
  const DenseMatrix ax = overlap_operator(xi, Axis::x).op.to_dense();
  const DenseMatrix abs_x = abs_overlap_operator(xi, Axis::x).to_dense();
  CHECK((abs_x * abs_x - ax * ax).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<DenseMatrix>(abs_x).eigenvalues();
  CHECK(ev.minCoeff() >= -1e-12);
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(abs_x);
  const DenseMatrix again = es.eigenvectors() * es.eigenvalues().cwiseAbs().cast<Complex>().asDiagonal() *
                            es.eigenvectors().adjoint();
  CHECK((again - abs_x).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(abs_overlap_operator(generate_patterns(7, 1, 1, false).pattern(0), Axis::x), UsageError);
}

TEST_CASE("absolute overlap in the maximally mixed state") {
  // Mean |sum of 10 fair +-1 coins| / 10 by binomial enumeration.
  double exact = 0.0;
  for (int k = 0; k <= 10; ++k) exact += binomial(10, k) * std::abs(10 - 2 * k) / 10.0 / 1024.0;
  CHECK(exact == doctest::Approx(0.246).epsilon(1e-3));
  const auto abs_z = abs_overlap_operator(kCaptionPattern, Axis::z);
  CHECK(hermitian_expectation(abs_z, DensityMatrix::maximally_mixed(10)) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("absolute overlap dominates the overlap") {
  Rng rng(6);
  const auto xi = generate_patterns(6, 1, 2, false).pattern(0);
  const auto m = overlap_operator(xi, Axis::z).op;
  const auto am = abs_overlap_operator(xi, Axis::z);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexVector p(64);
    for (Index i = 0; i < 64; ++i) p(i) = uniform_open01(rng);
    p /= p.sum();
    DenseMatrix rho = DenseMatrix::Zero(64, 64);
    rho.diagonal() = p;
    const DensityMatrix state(6, rho);
    CHECK(hermitian_expectation(am, state) >= std::abs(hermitian_expectation(m, state)) - 1e-15);
  }
}

TEST_CASE("histograms") {
  const std::vector<double> ones(50, 1.0);
  const auto h = histogram(ones, 4);
  REQUIRE(h.centers.size() == 5);
  CHECK(h.centers.front() == doctest::Approx(-1.0));
  CHECK(h.centers[1] == doctest::Approx(-0.5));
  CHECK(h.probability.back() == 1.0);

  // Uniform draws over the centers give a flat histogram (multinomial band).
  Rng rng(10);
  const int n = 10;
  const int samples = 22000;
  std::vector<double> draws;
  for (int k = 0; k < samples; ++k) draws.push_back(-1.0 + 2.0 * static_cast<double>(uniform_index(rng, n + 1)) / n);
  const auto flat = histogram(draws, n);
  double total = 0.0;
  const double p = 1.0 / (n + 1);
  for (double q : flat.probability) {
    total += q;
    CHECK(std::abs(q - p) <= 3.0 * std::sqrt(p * (1.0 - p) / samples) * 1.5);
  }
  CHECK(total == doctest::Approx(1.0));

  std::ostringstream os;
  h.write_csv(os);
  CHECK(os.str().rfind("bin_center,probability\n", 0) == 0);
  CHECK_THROWS_AS(histogram(std::vector<double>{1.5}, 4), UsageError);
}

TEST_CASE("peak envelope of a damped cosine") {
  const double dt = 0.01;
  const double tau = 10.0;
  const double omega = 5.0;
  const auto t = grid(dt, 40.0);
  const auto y = sampled(dt, 40.0, [&](double s) { return std::exp(-s / tau) * std::cos(omega * s); });
  const auto env = peak_envelope(t, y);
  REQUIRE(env.size() >= 25);
  for (std::size_t k = 0; k < env.size(); ++k) {
    CHECK(std::abs(env.peak[k] - std::exp(-env.t[k] / tau)) <= 1e-3);
    if (k > 0) CHECK(env.t[k] > env.t[k - 1]);
  }
}

TEST_CASE("peak envelope of a pure cosine") {
  const auto t = grid(0.01, 30.0);
  const auto y = sampled(0.01, 30.0, [](double s) { return std::cos(3.0 * s + 0.4); });
  const auto env = peak_envelope(t, y);
  CHECK(env.size() >= 12);
  for (double p : env.peak) CHECK(std::abs(p - 1.0) <= 1e-4);
}

TEST_CASE("peak envelope rejects unusable series") {
  const auto t = grid(0.01, 10.0);
  const auto mono = sampled(0.01, 10.0, [](double s) { return s; });
  CHECK_THROWS_AS(peak_envelope(t, mono), UsageError);
  // Fewer than 20 samples per period.
  const auto t_coarse = grid(0.1, 30.0);
  const auto fast = sampled(0.1, 30.0, [](double s) { return std::cos(5.0 * s); });
  CHECK_THROWS_AS(peak_envelope(t_coarse, fast), UsageError);
}
