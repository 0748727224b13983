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

#include <cmath>

#include "qhopfield/errors.hpp"
#include "qhopfield/lindblad.hpp"
#include "qhopfield/observables.hpp"
#include "qhopfield/random.hpp"
#include "qhopfield/spectra.hpp"

using namespace qhop;

namespace {

DensityMatrix random_density(int n, Rng& rng) {
  const Index dim = Index{1} << n;
  DenseMatrix a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) a(i, j) = Complex(uniform_open01(rng) - 0.5, uniform_open01(rng) - 0.5);
  DenseMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix(n, rho);
}

/// The master equation assembled from the operator forms of H and L_k.
DenseMatrix reference_rhs(const DenseMatrix& rho, const ModelSpec& model) {
  const DenseMatrix h = hamiltonian(model.omega, model.num_qubits()).to_dense();
  DenseMatrix out = -kI * (h * rho - rho * h);
  for (const auto& op : jump_operators(model.weights, model.beta())) {
    const DenseMatrix l = op.to_dense();
    const DenseMatrix ll = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
  }
  return out;
}

ModelSpec model_of(int n, int p, double omega, double t, std::uint64_t seed, bool balanced = false) {
  return make_model(generate_patterns(n, p, seed, balanced), omega, t);
}

}  // namespace

TEST_CASE("lindblad_rhs matches the operator form") {
  Rng rng(17);
  for (int n = 1; n <= 4; ++n) {
    const auto model = model_of(n, 2, 0.8, 0.3, 100 + n);
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = random_density(n, rng);
      const DensityMatrix d = lindblad_rhs(rho, model);
      CHECK((d.entries() - reference_rhs(rho.entries(), model)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(d.trace()) <= 1e-12 * static_cast<double>(rho.dim()));
      CHECK(d.hermiticity_error() <= 1e-14);
    }
  }
}

TEST_CASE("single qubit fixed point") {
  const auto model = model_of(1, 1, 0.0, 0.7, 1);
  const DensityMatrix d = lindblad_rhs(DensityMatrix::maximally_mixed(1), model);
  CHECK(d.entries().cwiseAbs().maxCoeff() <= 1e-15);

  IntegrationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 100.0;
  const auto steady = steady_state_by_integration(DensityMatrix::basis_projector(1, 0), model, cfg);
  CHECK(steady.converged);
  CHECK((steady.state.entries() - DensityMatrix::maximally_mixed(1).entries()).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(steady.residual <= cfg.steady_tol);
}

TEST_CASE("rhs size mismatch is a usage error") {
  const auto model = model_of(2, 1, 1.0, 1.0, 1);
  CHECK_THROWS_AS(lindblad_rhs(DensityMatrix::maximally_mixed(3), model), UsageError);
}

TEST_CASE("omega = 0 keeps a diagonal state diagonal") {
  const auto model = model_of(4, 2, 0.0, 0.4, 5);
  IntegrationConfig cfg;
  cfg.dt = 0.02;
  cfg.t_max = 20.0;
  cfg.record_every = 25;
  double worst = 0.0;
  integrate(DensityMatrix::basis_projector(4, 6), HopfieldGenerator(model), cfg, {},
            [&](double, const DensityMatrix& rho) { worst = std::max(worst, rho.max_off_diagonal()); });
  CHECK(worst <= 1e-10);
}

TEST_CASE("integration agrees with the spectral propagator") {
  const auto model = model_of(4, 2, 1.3, 0.4, 8);
  const auto dec = eigendecomposition(build_liouvillian(model));
  const auto pats = model.patterns;
  const auto m = overlap_operator(pats.pattern(0), Axis::z).op;
  const auto rho0 = DensityMatrix::basis_projector(4, pats.basis_index(0, -1));
  IntegrationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 5.0;
  cfg.record_every = 50;
  std::vector<NamedObservable> obs{{"m", m}};
  const auto series = integrate(rho0, model, cfg, obs);
  double worst = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = series.times()[k];
    const double exact = hermitian_expectation(m, propagate_spectral(dec, rho0, t));
    worst = std::max(worst, std::abs(series.column(0)[k] - exact));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("steady state by integration matches the Liouvillian kernel") {
  for (int n : {2, 3, 4}) {
    const auto model = model_of(n, 1, 0.9, 0.5, 20 + n, n % 2 == 0);
    IntegrationConfig cfg;
    cfg.dt = 0.02;
    cfg.t_max = 400.0;
    cfg.steady_tol = 1e-10;
    const auto steady = steady_state_by_integration(DensityMatrix::basis_projector(n, 0), model, cfg);
    CHECK(steady.converged);
    const auto kernel = steady_state_from_kernel(build_liouvillian(model));
    CHECK((steady.state.entries() - kernel.entries()).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(lindblad_rhs(kernel, model).entries().cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("steady state flag reports an unconverged horizon") {
  const auto model = model_of(3, 1, 0.5, 0.3, 2);
  IntegrationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 0.5;
  const auto steady = steady_state_by_integration(DensityMatrix::basis_projector(3, 0), model, cfg);
  CHECK_FALSE(steady.converged);
  CHECK(steady.time == doctest::Approx(0.5));
}

TEST_CASE("halving dt shows fourth-order convergence") {
  const auto model = model_of(4, 1, 2.0, 0.3, 4, true);
  const auto pats = model.patterns;
  std::vector<NamedObservable> obs{{"m", overlap_operator(pats.pattern(0), Axis::z).op}};
  const auto rho0 = DensityMatrix::basis_projector(4, pats.basis_index(0, -1));
  auto run = [&](double dt, int every) {
    IntegrationConfig cfg;
    cfg.dt = dt;
    cfg.t_max = 4.0;
    cfg.record_every = every;
    return integrate(rho0, model, cfg, obs).column(0);
  };
  const auto coarse = run(0.04, 5);
  const auto mid = run(0.02, 10);
  const auto fine = run(0.01, 20);
  REQUIRE(coarse.size() == fine.size());
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    e1 = std::max(e1, std::abs(coarse[k] - mid[k]));
    e2 = std::max(e2, std::abs(mid[k] - fine[k]));
  }
  CHECK(e2 <= 1e-5);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("unstable step size is reported with its time") {
  const auto model = model_of(3, 1, 5.0, 0.2, 3);
  IntegrationConfig cfg;
  cfg.dt = 1.0;
  cfg.t_max = 200.0;
  CHECK_THROWS_AS(integrate(DensityMatrix::basis_projector(3, 0), model, cfg, {}), NumericalError);
}

TEST_CASE("stable step keeps every Liouvillian mode inside the RK4 region") {
  for (double omega : {0.0, 0.5, 5.0}) {
    const auto model = model_of(3, 2, omega, 0.3, 12);
    const double h = stable_rk4_step(HopfieldGenerator(model));
    const auto dec = eigendecomposition(build_liouvillian(model));
    for (Index i = 0; i < dec.eigenvalues.size(); ++i) {
      const Complex z = h * dec.eigenvalues(i);
      const Complex r = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
      CHECK(std::abs(r) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("limit-cycle point oscillates between pattern and antipattern") {
  const auto pats = generate_patterns(10, 1, 77, true);
  const auto model = make_model(pats, 5.0, 0.005);
  std::vector<NamedObservable> obs{{"m", overlap_operator(pats.pattern(0), Axis::z).op}};
  IntegrationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_max = 0.7;
  cfg.record_every = 1;
  const auto series = integrate(DensityMatrix::basis_projector(10, pats.basis_index(0, -1)), model, cfg, obs);
  const auto& m = series.column(0);
  CHECK(m.front() == doctest::Approx(-1.0));
  CHECK(*std::max_element(m.begin(), m.end()) >= 0.8);
}

TEST_CASE("retrieval at small omega and temperature") {
  const auto pats = generate_patterns(8, 1, 5, true);
  const auto model = make_model(pats, 0.01, 0.005);
  const HopfieldGenerator gen(model);
  IntegrationConfig cfg;
  cfg.dt = std::min(0.25, stable_rk4_step(gen));
  cfg.t_max = 50.0;
  const auto steady = steady_state_by_integration(DensityMatrix::basis_projector(8, pats.basis_index(0)), gen, cfg);
  CHECK(hermitian_expectation(abs_overlap_operator(pats.pattern(0), Axis::z), steady.state) >= 0.99);
}
