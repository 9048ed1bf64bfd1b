// Copyright 2026 The percwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "percwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace percwalk {

double unitarity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

CoinOperator CoinOperator::family(double alpha, double beta) {
  if (std::abs(std::cos(beta)) <= 1e-9) {
    throw ConfigError("degenerate coin out of scope: beta = pi/2 (mod pi) is excluded");
  }
  const Complex i(0.0, 1.0);
  CoinOperator c;
  c.matrix_.resize(2, 2);
  c.matrix_ << i * std::exp(-i * alpha) * std::sin(beta), std::cos(beta),  //
      std::cos(beta), i * std::exp(i * alpha) * std::sin(beta);
  c.params_ = std::make_pair(alpha, beta);
  return c;
}

CoinOperator CoinOperator::hadamard() { return family(kPi / 2, kPi / 4); }

CoinOperator CoinOperator::from_matrix(Matrix m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw ConfigError("coin matrix must be square and non-empty");
  const double defect = unitarity_defect(m);
  if (defect >= 1e-12) throw ConfigError("coin matrix is not unitary (max |C^dag C - I| = " + std::to_string(defect) + ")");
  CoinOperator c;
  c.matrix_ = std::move(m);
  return c;
}

ReflectionOperator ReflectionOperator::sigma_x() { return from_permutation({1, 0}); }

ReflectionOperator ReflectionOperator::from_permutation(std::vector<int> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= static_cast<int>(perm.size()) || seen[static_cast<std::size_t>(v)]) {
      throw ConfigError("reflection must be a permutation of 0..d-1");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  ReflectionOperator r;
  r.perm_ = std::move(perm);
  return r;
}

ReflectionOperator ReflectionOperator::default_for(int d) {
  if (d == 2) return sigma_x();
  throw ConfigError("no default reflection for degree " + std::to_string(d) + "; supply a permutation");
}

int ReflectionOperator::trace() const {
  int t = 0;
  for (std::size_t c = 0; c < perm_.size(); ++c) t += perm_[c] == static_cast<int>(c) ? 1 : 0;
  return t;
}

Matrix ReflectionOperator::matrix() const {
  const auto d = static_cast<Eigen::Index>(perm_.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) m(perm_[static_cast<std::size_t>(c)], c) = 1.0;
  return m;
}

SparseMatrix StepOperator::sparse() const {
  const auto n = static_cast<Eigen::Index>(target_.size());
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(target_.size());
  for (Eigen::Index j = 0; j < n; ++j) triplets.emplace_back(target_[static_cast<std::size_t>(j)], j, 1.0);
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Matrix StepOperator::dense() const { return Matrix(sparse()); }

StepOperator step_operator(const PercolationGraph& g, const EdgeConfig& k, const ReflectionOperator& r) {
  if (r.dimension() != g.degree()) throw ConfigError("reflection dimension does not match graph degree");
  if (k.edge_count() != g.edge_count()) throw ConfigError("edge configuration does not belong to this graph");
  const int dim = g.dimension();
  std::vector<int> target(static_cast<std::size_t>(dim));
  std::vector<bool> hit(static_cast<std::size_t>(dim), false);
  for (int a = 0; a < g.vertex_count(); ++a) {
    for (int c = 0; c < g.degree(); ++c) {
      const int to = k.contains(g.edge(a, c)) ? g.index(g.neighbor(a, c), c) : g.index(a, r.apply(c));
      if (hit[static_cast<std::size_t>(to)]) {
        throw NumericalError("reflection operator incompatible with direction labeling: step operator is not unitary");
      }
      hit[static_cast<std::size_t>(to)] = true;
      target[static_cast<std::size_t>(g.index(a, c))] = to;
    }
  }
  return StepOperator(std::move(target), k);
}

WalkUnitary walk_unitary(const StepOperator& s, const CoinOperator& c) {
  const int d = c.dimension();
  const int dim = s.dimension();
  if (dim % d != 0) throw ConfigError("coin dimension does not divide the step operator dimension");
  const Matrix& cm = c.matrix();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * d);
  // Column |a,b⟩: the coin yields Σ_c' C(c',b)|a,c'⟩, then the shift moves each |a,c'⟩.
  for (int col = 0; col < dim; ++col) {
    const int a = col / d;
    const int b = col % d;
    for (int cp = 0; cp < d; ++cp) {
      if (cm(cp, b) != Complex(0.0)) triplets.emplace_back(s.target(a * d + cp), col, cm(cp, b));
    }
  }
  SparseMatrix u(dim, dim);
  u.setFromTriplets(triplets.begin(), triplets.end());
  return WalkUnitary(std::move(u), s.config());
}

std::vector<Complex> rc_spectrum(const CoinOperator& c, const ReflectionOperator& r) {
  if (c.dimension() != r.dimension()) throw ConfigError("coin and reflection dimensions differ");
  Eigen::ComplexEigenSolver<Matrix> es(r.matrix() * c.matrix(), false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  auto phase = [](Complex z) {
    double a = std::arg(z);
    return a < 0 ? a + 2 * kPi : a;
  };
  std::sort(out.begin(), out.end(), [&](Complex x, Complex y) { return phase(x) < phase(y); });
  return out;
}

void DensityMatrix::validate(const Matrix& m, bool check_positivity, double tol, double psd_tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw NumericalError("density matrix must be square and non-empty");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw NumericalError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tol) throw NumericalError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  if (check_positivity) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -psd_tol) throw NumericalError("density matrix not positive (min eigenvalue " + std::to_string(min_eig) + ")");
  }
}

DensityMatrix::DensityMatrix(Matrix m, bool check_positivity) : matrix_(std::move(m)) {
  validate(matrix_, check_positivity);
}

DensityMatrix localized_initial_state(const PercolationGraph& g, int x0, double theta, double phi, double purity_weight) {
  if (g.degree() != 2) throw ConfigError("Bloch-sphere initial state needs a two-dimensional coin (d = 2)");
  if (x0 < 0 || x0 >= g.vertex_count()) throw ConfigError("initial vertex x0=" + std::to_string(x0) + " out of range");
  if (!(purity_weight >= 0.0 && purity_weight <= 1.0)) throw ConfigError("initial-state P must lie in [0, 1]");
  const Complex i(0.0, 1.0);
  Eigen::Vector2cd psi(std::cos(theta / 2), std::exp(i * phi) * std::sin(theta / 2));
  const Eigen::Matrix2cd coin_state =
      purity_weight * psi * psi.adjoint() + 0.5 * (1.0 - purity_weight) * Eigen::Matrix2cd::Identity();
  Matrix rho = Matrix::Zero(g.dimension(), g.dimension());
  rho.block(g.index(x0, 0), g.index(x0, 0), 2, 2) = coin_state;
  return DensityMatrix(std::move(rho));
}

}  // namespace percwalk
