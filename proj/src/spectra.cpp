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

#include "qhopfield/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "qhopfield/errors.hpp"
#include "qhopfield/generator.hpp"
#include "qhopfield/rk4.hpp"

namespace qhop {

namespace {

using ColSparse = Eigen::SparseMatrix<Complex>;

ColSparse col_sparse(const QuantumOperator& op) { return ColSparse(op.to_sparse()); }

ColSparse sparse_identity(Index d) {
  ColSparse id(d, d);
  id.setIdentity();
  return id;
}

}  // namespace

SparseMatrix build_liouvillian(const ModelSpec& model, int max_qubits) {
  const int n = model.num_qubits();
  require(n <= max_qubits, "Liouvillian construction is capped at N = " + std::to_string(max_qubits) +
                               " (requested N = " + std::to_string(n) + ")");
  const Index d = hilbert_dim(n);
  const ColSparse id = sparse_identity(d);
  const ColSparse h = col_sparse(hamiltonian(model.omega, n));
  const ColSparse ht = h.transpose();
  ColSparse l = Complex(0.0, -1.0) * (ColSparse(Eigen::kroneckerProduct(id, h)) -
                                      ColSparse(Eigen::kroneckerProduct(ht, id)));
  for (const auto& jump : jump_operators(model.weights, model.beta())) {
    const ColSparse lk = col_sparse(jump);
    const ColSparse ldl = ColSparse(lk.adjoint()) * lk;
    const ColSparse ldlt = ldl.transpose();
    const ColSparse lbar = lk.conjugate();
    l += ColSparse(Eigen::kroneckerProduct(lbar, lk));
    l -= 0.5 * (ColSparse(Eigen::kroneckerProduct(id, ldl)) + ColSparse(Eigen::kroneckerProduct(ldlt, id)));
  }
  l.prune(Complex(0.0), 0.0);
  return SparseMatrix(l);
}

std::string to_string(SpectrumMethod method) {
  return method == SpectrumMethod::dense ? "dense" : "iterative";
}

SpectrumMethod parse_spectrum_method(std::string_view name) {
  if (name == "dense") return SpectrumMethod::dense;
  if (name == "iterative") return SpectrumMethod::iterative;
  throw UsageError("unknown spectrum method '" + std::string(name) + "' (expected dense or iterative)");
}

nlohmann::json SpectrumReport::to_json() const {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : eigenvalues) values.push_back({v.real(), v.imag()});
  nlohmann::json doc{{"N", num_qubits},
                     {"Omega", omega},
                     {"T", temperature},
                     {"P", num_patterns},
                     {"seed", seed},
                     {"method", qhop::to_string(method)},
                     {"solver", solver},
                     {"eigenvalues", values},
                     {"steady_index", steady_index}};
  if (osc_pair) {
    doc["osc_pair"] = {osc_pair->first, osc_pair->second};
    doc["gap"] = gap;
    doc["osc_freq"] = osc_freq;
  } else {
    doc["osc_pair"] = nullptr;
    doc["gap"] = nullptr;
    doc["osc_freq"] = nullptr;
  }
  if (!residuals.empty()) doc["residuals"] = residuals;
  return doc;
}

namespace {

bool descending_real(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Sorts eigenvalues (and residuals alongside) and fills the classification.
void classify(SpectrumReport& r) {
  std::vector<std::size_t> idx(r.eigenvalues.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return descending_real(r.eigenvalues[a], r.eigenvalues[b]); });
  std::vector<Complex> values;
  std::vector<double> residuals;
  for (std::size_t i : idx) {
    values.push_back(r.eigenvalues[i]);
    if (!r.residuals.empty()) residuals.push_back(r.residuals[i]);
  }
  r.eigenvalues = std::move(values);
  r.residuals = std::move(residuals);

  r.steady_index = -1;
  double best = INFINITY;
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    if (std::abs(r.eigenvalues[i]) < best) {
      best = std::abs(r.eigenvalues[i]);
      r.steady_index = static_cast<int>(i);
    }
  }
  r.osc_pair.reset();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const Complex v = r.eigenvalues[i];
    if (std::abs(v.imag()) <= kNonrealTol) continue;
    int partner = -1;
    double dist = INFINITY;
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j) {
      const double dj = std::abs(r.eigenvalues[j] - std::conj(v));
      if (j != i && dj < dist) {
        dist = dj;
        partner = static_cast<int>(j);
      }
    }
    if (dist > 1e-6 * std::max(1.0, std::abs(v))) partner = -1;
    r.osc_pair = std::make_pair(static_cast<int>(i), partner);
    r.gap = std::abs(v.real());
    r.osc_freq = std::abs(v.imag());
    break;
  }
}

int qubits_of_dim(Index liouville_dim) {
  int n = 0;
  while (n <= kMaxQubits && (Index{1} << (2 * n)) < liouville_dim) ++n;
  require(n >= 1 && (Index{1} << (2 * n)) == liouville_dim, "Liouvillian dimension is not 4^N");
  return n;
}

SpectrumReport dense_spectrum(const SparseMatrix& l, int num_qubits, const SpectrumOptions& options) {
  require(num_qubits <= options.dense_max_qubits,
          "dense spectrum is capped at N = " + std::to_string(options.dense_max_qubits) +
              "; use the iterative method");
  const DenseMatrix a(l);
  Eigen::ComplexEigenSolver<DenseMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  SpectrumReport r;
  r.method = SpectrumMethod::dense;
  r.solver = "dense";
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  classify(r);
  if (options.k > 0 && static_cast<std::size_t>(options.k) < r.eigenvalues.size()) {
    r.eigenvalues.resize(static_cast<std::size_t>(options.k));
    classify(r);
  }
  return r;
}

struct IterativeProblem {
  Index dim;
  LinearMap apply;
  /// Upper bound on the spectral radius of L.
  double radius;
};

struct IterativeOutcome {
  std::vector<Complex> values;
  std::vector<double> residuals;
  bool ok;
  double worst;
};

IterativeOutcome evaluate(const IterativeProblem& p, const ArnoldiResult& ar, bool rayleigh) {
  IterativeOutcome out{{}, {}, true, 0.0};
  ComplexVector lv(p.dim);
  for (Index c = 0; c < ar.vectors.cols(); ++c) {
    const ComplexVector v = ar.vectors.col(c);
    p.apply(v, lv);
    const Complex lambda = rayleigh ? v.dot(lv) / v.squaredNorm() : ar.values[static_cast<std::size_t>(c)];
    const double res = (lv - lambda * v).norm() / v.norm();
    out.values.push_back(lambda);
    out.residuals.push_back(res);
    out.worst = std::max(out.worst, res);
  }
  return out;
}

SpectrumReport iterative_spectrum(const IterativeProblem& p, const SpectrumOptions& options) {
  require(options.k >= 1, "iterative spectrum needs k >= 1");
  require(options.k < p.dim, "iterative spectrum needs k < 4^N");
  require(options.tau > 0.0 && options.residual_tol > 0.0, "invalid spectrum options");
  SpectrumReport r;
  r.method = SpectrumMethod::iterative;
  double best = INFINITY;

  if (options.mode != IterativeMode::semigroup) {
    ArnoldiOptions ao = options.arnoldi;
    if (options.mode == IterativeMode::automatic) ao.max_restarts = std::min(ao.max_restarts, options.direct_restarts);
    const ArnoldiResult ar = arnoldi_eigs(p.apply, p.dim, options.k, RitzOrder::largest_real, ao);
    IterativeOutcome out = evaluate(p, ar, false);
    best = std::min(best, out.worst);
    if (out.worst <= options.residual_tol) {
      r.solver = "direct";
      r.eigenvalues = std::move(out.values);
      r.residuals = std::move(out.residuals);
      classify(r);
      return r;
    }
    if (options.mode == IterativeMode::direct) {
      throw NumericalError("Arnoldi on L did not converge after " + std::to_string(ar.restarts) +
                           " restarts; best residual " + std::to_string(best));
    }
  }

  // Semigroup mode: largest-magnitude eigenvalues of an RK4 propagator.
  const double h_max = 2.5 / std::max(p.radius, 1e-12);
  const int substeps = std::max(1, static_cast<int>(std::ceil(options.tau / h_max)));
  const double h = options.tau / substeps;
  auto propagator = [&p, substeps, h](const ComplexVector& in, ComplexVector& out) {
    Rk4Stepper<ComplexVector> stepper;
    out = in;
    for (int s = 0; s < substeps; ++s) stepper.step(out, h, p.apply);
  };
  const ArnoldiResult ar = arnoldi_eigs(propagator, p.dim, options.k, RitzOrder::largest_magnitude, options.arnoldi);
  IterativeOutcome out = evaluate(p, ar, true);
  best = std::min(best, out.worst);
  if (out.worst > options.residual_tol) {
    throw NumericalError("Arnoldi did not converge after " + std::to_string(ar.restarts) +
                         " restarts; best residual " + std::to_string(best) + " (tolerance " +
                         std::to_string(options.residual_tol) + ")");
  }
  r.solver = "semigroup";
  r.eigenvalues = std::move(out.values);
  r.residuals = std::move(out.residuals);
  classify(r);
  return r;
}

IterativeProblem sparse_problem(const SparseMatrix& l) {
  double radius = 0.0;
  for (Index i = 0; i < l.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(l, i); it; ++it) row += std::abs(it.value());
    radius = std::max(radius, row);
  }
  return {l.rows(), [&l](const ComplexVector& in, ComplexVector& out) { out.noalias() = l * in; }, radius};
}

}  // namespace

SpectrumReport spectrum(const SparseMatrix& liouvillian, int num_qubits, const SpectrumOptions& options) {
  require(liouvillian.rows() == liouvillian.cols(), "Liouvillian must be square");
  require(qubits_of_dim(liouvillian.rows()) == num_qubits, "Liouvillian dimension does not match N");
  SpectrumReport r = options.method == SpectrumMethod::dense
                         ? dense_spectrum(liouvillian, num_qubits, options)
                         : iterative_spectrum(sparse_problem(liouvillian), options);
  r.num_qubits = num_qubits;
  return r;
}

SpectrumReport spectrum(const ModelSpec& model, const SpectrumOptions& options) {
  const int n = model.num_qubits();
  SpectrumReport r;
  if (options.method == SpectrumMethod::dense) {
    r = dense_spectrum(build_liouvillian(model, std::max(options.dense_max_qubits, n)), n, options);
  } else {
    require(n <= kMaxQubits / 2, "iterative spectrum size out of range");
    auto generator = std::make_shared<HopfieldGenerator>(model);
    const Index d = generator->dim();
    auto apply = [generator, d](const ComplexVector& in, ComplexVector& out) {
      DenseMatrix rho = Eigen::Map<const DenseMatrix>(in.data(), d, d);
      DenseMatrix res;
      generator->apply_liouvillian(rho, res);
      out = Eigen::Map<const ComplexVector>(res.data(), d * d);
    };
    const double radius = 2.0 * n * model.omega + 2.0 * generator->decay_rates().maxCoeff();
    r = iterative_spectrum({d * d, apply, radius}, options);
  }
  r.num_qubits = n;
  r.omega = model.omega;
  r.temperature = model.temperature;
  r.num_patterns = model.patterns.num_patterns();
  r.seed = model.patterns.seed();
  return r;
}

OscillationGap oscillation_gap(const SpectrumReport& report) {
  if (!report.osc_pair) {
    throw NumericalError("no nonreal eigenvalue among the " + std::to_string(report.eigenvalues.size()) +
                         " computed; request more eigenvalues (larger k)");
  }
  return {report.gap, report.osc_freq};
}

EigenDecomposition eigendecomposition(const SparseMatrix& liouvillian) {
  qubits_of_dim(liouvillian.rows());
  require(liouvillian.rows() <= (Index{1} << (2 * kDefaultDenseSpectrumMaxQubits)),
          "eigendecomposition is limited to N <= " + std::to_string(kDefaultDenseSpectrumMaxQubits));
  Eigen::ComplexEigenSolver<DenseMatrix> es{DenseMatrix(liouvillian)};
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  EigenDecomposition dec{es.eigenvalues(), es.eigenvectors(), DenseMatrix()};
  dec.left = dec.right.partialPivLu().inverse();
  return dec;
}

DensityMatrix propagate_spectral(const EigenDecomposition& decomposition, const DensityMatrix& rho0, double t) {
  require(decomposition.right.rows() == rho0.dim() * rho0.dim(), "decomposition and state sizes differ");
  const ComplexVector c = decomposition.left * vectorize(rho0);
  ComplexVector weighted(c.size());
  for (Index i = 0; i < c.size(); ++i) weighted[i] = std::exp(decomposition.eigenvalues[i] * t) * c[i];
  return devectorize(decomposition.right * weighted);
}

DensityMatrix steady_state_from_kernel(const SparseMatrix& liouvillian, double kernel_tol) {
  const int n = qubits_of_dim(liouvillian.rows());
  ComplexVector kernel;
  std::vector<Complex> near_zero;
  if (n <= kDefaultDenseSpectrumMaxQubits) {
    Eigen::ComplexEigenSolver<DenseMatrix> es{DenseMatrix(liouvillian)};
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (std::abs(es.eigenvalues()[i]) <= kernel_tol) {
        near_zero.push_back(es.eigenvalues()[i]);
        kernel = es.eigenvectors().col(i);
      }
    }
  } else {
    const IterativeProblem p = sparse_problem(liouvillian);
    SpectrumOptions options;
    options.method = SpectrumMethod::iterative;
    options.k = 4;
    const ArnoldiResult ar = arnoldi_eigs(p.apply, p.dim, options.k, RitzOrder::largest_real, options.arnoldi);
    for (Index c = 0; c < ar.vectors.cols(); ++c) {
      if (std::abs(ar.values[static_cast<std::size_t>(c)]) <= kernel_tol) {
        near_zero.push_back(ar.values[static_cast<std::size_t>(c)]);
        kernel = ar.vectors.col(c);
      }
    }
  }
  if (near_zero.size() != 1) {
    std::ostringstream os;
    os << "steady state kernel has dimension " << near_zero.size() << " at tolerance " << kernel_tol;
    for (const auto& v : near_zero) os << ' ' << v;
    throw NumericalError(os.str());
  }
  DensityMatrix rho = devectorize(kernel);
  DenseMatrix& m = rho.entries();
  m /= m.trace();
  m = (0.5 * (m + m.adjoint())).eval();
  const double residual = (liouvillian * vectorize(rho)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-8)) {
    throw NumericalError("steady state kernel residual " + std::to_string(residual) + " exceeds 1e-8");
  }
  return rho;
}

}  // namespace qhop
