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


#include "percwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "percwalk/linalg.hpp"

namespace percwalk {

void ProbabilityDistribution::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw NumericalError("probability weight below zero: " + std::to_string(w));
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw NumericalError("probability weights sum to " + std::to_string(sum));
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t n) {
  return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

ProbabilityDistribution joint_distribution(const Matrix& rho) {
  ProbabilityDistribution out;
  out.weights.resize(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) out.weights[static_cast<std::size_t>(i)] = rho(i, i).real();
  return out;
}

ProbabilityDistribution position_marginal(const Matrix& rho, int degree) {
  if (degree < 1 || rho.rows() % degree != 0) throw ConfigError("state dimension is not a multiple of the degree");
  ProbabilityDistribution out;
  out.weights.assign(static_cast<std::size_t>(rho.rows() / degree), 0.0);
  for (Eigen::Index i = 0; i < rho.rows(); ++i) out.weights[static_cast<std::size_t>(i / degree)] += rho(i, i).real();
  return out;
}

double manhattan(const ProbabilityDistribution& p, const ProbabilityDistribution& r) {
  if (p.size() != r.size()) {
    throw ConfigError("manhattan: length mismatch (" + std::to_string(p.size()) + " vs " + std::to_string(r.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - r[i]);
  return sum;
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

double asymptotic_purity_localized(int n, double purity_weight) {
  if (purity_weight < 0.0 || purity_weight > 1.0) throw ConfigError("P must lie in [0, 1]");
  const double nn = static_cast<double>(n);
  return 1.0 / (2.0 * nn) + purity_weight * purity_weight / (2.0 * nn * nn);
}

double fidelity_mixed(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  // Eigenvalues inside the solver's round-off band count as zero.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > noise) root_sum += std::sqrt(es.eigenvalues()(i));
  }
  return root_sum * root_sum / static_cast<double>(rho.rows());
}

int mixing_time_measured(std::span<const double> distances, double epsilon) {
  if (distances.empty()) throw ConfigError("mixing time needs a nonempty trajectory");
  const std::size_t tail = std::max<std::size_t>(1, (distances.size() + 9) / 10);
  for (std::size_t t = distances.size() - tail; t < distances.size(); ++t) {
    if (distances[t] > epsilon) throw ConvergenceError("horizon too short: tail not converged");
  }
  for (std::size_t t = distances.size(); t-- > 0;) {
    if (distances[t] > epsilon) return static_cast<int>(t) + 1;
  }
  return 0;
}

std::vector<double> position_distances(const Trajectory& trajectory, int degree, const ProbabilityDistribution& reference) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& state : trajectory.states) out.push_back(manhattan(position_marginal(state.matrix(), degree), reference));
  return out;
}

ProbabilityDistribution asymptotic_reference(const AttractorBasis& basis, const Matrix& rho0, int degree) {
  ProbabilityDistribution out = position_marginal(asymptotic_average(basis, rho0), degree);
  out.validate();
  return out;
}

double mixing_time_formula(double epsilon, Complex lambda_prime, Complex overlap) {
  const double log_lambda = std::log(std::abs(lambda_prime));
  return std::log(epsilon) / log_lambda - std::log(std::abs(overlap)) / log_lambda;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 1 || lo <= 0.0 || hi <= 0.0) throw ConfigError("logspace needs n >= 1 and positive bounds");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  return out;
}

MixingReport mixing_time_estimate(const Superoperator& phi, const Matrix& rho0, std::span<const double> epsilon_grid) {
  const int dim = phi.operator_dimension();
  if (dim > 64) throw NumericalError("mixing estimate guard: dN = " + std::to_string(dim) + " exceeds 64");
  const Matrix f = phi.dense();
  Eigen::ComplexEigenSolver<Matrix> es(f, true);
  const Vector& values = es.eigenvalues();
  Matrix vectors = es.eigenvectors();
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    auto column = vectors.col(i);
    column.normalize();
    linalg::fix_phase(column);
  }
  const Vector rho_vec = linalg::vec(rho0);

  struct Mode {
    Eigen::Index index;
    double modulus;
    double phase;
    Complex overlap;
  };
  std::vector<Mode> decaying;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double m = std::abs(values(i));
    if (m >= 1.0 - 1e-8) continue;
    double ph = std::arg(values(i));
    if (ph < 0) ph += 2 * kPi;
    decaying.push_back({i, m, ph, vectors.col(i).dot(rho_vec)});
  }
  if (decaying.empty()) throw NumericalError("no decaying eigenvalue: every eigenvalue of the channel is unimodular");
  std::sort(decaying.begin(), decaying.end(), [](const Mode& a, const Mode& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    return a.phase < b.phase;
  });

  MixingReport report;
  report.epsilon_grid.assign(epsilon_grid.begin(), epsilon_grid.end());
  const Mode* chosen = nullptr;
  for (std::size_t start = 0; start < decaying.size() && chosen == nullptr;) {
    std::size_t end = start + 1;
    while (end < decaying.size() && decaying[start].modulus - decaying[end].modulus < 1e-8) ++end;
    const Mode* best = nullptr;
    for (std::size_t k = start; k < end; ++k) {
      if (std::abs(decaying[k].overlap) <= 1e-10) continue;
      if (best == nullptr || std::abs(decaying[k].overlap) > std::abs(best->overlap) + 1e-14) best = &decaying[k];
    }
    if (best != nullptr) {
      chosen = best;
      for (std::size_t k = start; k < end; ++k) {
        report.shell.push_back(values(decaying[k].index));
        report.shell_overlaps.push_back(decaying[k].overlap);
      }
    }
    start = end;
  }
  if (chosen == nullptr) throw NumericalError("initial state has no overlap with any decaying mode");

  report.lambda_prime = values(chosen->index);
  report.overlap = chosen->overlap;

  Eigen::BDCSVD<Matrix> svd(vectors);
  const auto& sigma = svd.singularValues();
  report.condition_number = sigma(sigma.size() - 1) > 0 ? sigma(0) / sigma(sigma.size() - 1) : INFINITY;
  const Vector coefficients = vectors.partialPivLu().solve(rho_vec);
  report.left_coefficient = coefficients(chosen->index);

  for (double eps : epsilon_grid) report.t_estimated.push_back(mixing_time_formula(eps, report.lambda_prime, report.overlap));
  return report;
}

}  // namespace percwalk
