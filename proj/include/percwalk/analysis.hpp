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


#pragma once

#include <span>
#include <vector>

#include "percwalk/attractor.hpp"
#include "percwalk/channel.hpp"
#include "percwalk/core.hpp"

namespace percwalk {

/// Nonnegative weights summing to one (to 1e-10); negatives down to -1e-12
/// are tolerated as round-off.
struct ProbabilityDistribution {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }

  /// Throws NumericalError if the invariants fail.
  void validate() const;
  static ProbabilityDistribution uniform(std::size_t n);
};

/// Diagonal of ρ, indexed a·d + c.
ProbabilityDistribution joint_distribution(const Matrix& rho);
/// Coin-summed diagonal: N weights.
ProbabilityDistribution position_marginal(const Matrix& rho, int degree);

/// Σ|p_i − r_i|. ConfigError on length mismatch.
double manhattan(const ProbabilityDistribution& p, const ProbabilityDistribution& r);

/// Tr ρ².
double purity(const Matrix& rho);
/// 1/(2N) + P²/(2N²).
double asymptotic_purity_localized(int n, double purity_weight);

/// F(ρ, I/D) = (Σ √λ_i)² / D over the eigenvalues of ρ; eigenvalues below
/// 64·ε_machine·max|λ| are treated as zero.
double fidelity_mixed(const Matrix& rho);

/// Smallest t such that every sampled distance from t on is ≤ ε:
/// 1 + the last index above ε, or 0. ConvergenceError when any of the last
/// 10% of samples is above ε.
int mixing_time_measured(std::span<const double> distances, double epsilon);

/// Manhattan distances of the position marginals to `reference`.
std::vector<double> position_distances(const Trajectory& trajectory, int degree, const ProbabilityDistribution& reference);

/// Time-averaged asymptotic position distribution of ρ0.
ProbabilityDistribution asymptotic_reference(const AttractorBasis& basis, const Matrix& rho0, int degree);

struct MixingReport {
  std::vector<double> epsilon_grid;
  /// Filled by the caller from a trajectory; empty otherwise.
  std::vector<int> t_measured;
  std::vector<double> t_estimated;
  Complex lambda_prime;
  /// Tr(X† ρ0) with X the HS-normalized right eigenmatrix of λ′.
  Complex overlap;
  /// Coefficient of λ′ in the eigen-expansion of ρ0 (left eigenvector).
  Complex left_coefficient;
  /// σ_max / σ_min of the eigenvector matrix.
  double condition_number = 0.0;
  /// Members of the largest decaying |λ| shell with a nonzero overlap.
  std::vector<Complex> shell;
  std::vector<Complex> shell_overlaps;
};

/// t(ε) = log ε / log|λ′| − log|O| / log|λ′|.
double mixing_time_formula(double epsilon, Complex lambda_prime, Complex overlap);

/// Spectral mixing-time estimate. λ′ is taken from the largest-modulus shell
/// (|λ| < 1 − 1e-8, members within 1e-8) that carries a nonzero overlap
/// (|O| > 1e-10); inside the shell the member with the largest |O| wins.
/// NumericalError if dN > 64 or nothing decays.
MixingReport mixing_time_estimate(const Superoperator& phi, const Matrix& rho0, std::span<const double> epsilon_grid);

/// n values logarithmically spaced over [lo, hi], inclusive.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace percwalk
