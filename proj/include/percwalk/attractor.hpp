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
#include <string>
#include <variant>
#include <vector>

#include "percwalk/channel.hpp"
#include "percwalk/core.hpp"
#include "percwalk/graph.hpp"
#include "percwalk/walk.hpp"

namespace percwalk {

/// One common eigenoperator: U_K X U_K† = λ X for every configuration K.
struct AttractorItem {
  Complex eigenvalue;
  Matrix matrix;
};

/// HS-orthonormal attractors ordered by eigenvalue phase in [0, 2π).
struct AttractorBasis {
  std::vector<AttractorItem> items;
  /// "line", "cycle-odd-special", "cycle-even-special", "cycle-N2",
  /// "cycle-generic" for catalog results; "numeric" otherwise.
  std::string case_tag = "numeric";

  std::size_t dimension() const { return items.size(); }
  /// Distinct eigenvalues (merged within 1e-6), in item order.
  std::vector<Complex> eigenvalues() const;
  /// Columns: vectorized items whose eigenvalue lies within `tol` of λ.
  Matrix subspace(Complex lambda, double tol = 1e-6) const;
};

/// Attractors from the unit-circle spectrum of Φ: every eigenvalue with
/// ||λ| − 1| < 1e-8, eigenspaces taken as null spaces of Φ − λ. Degenerate
/// eigenspaces are canonicalized (weighted matrix-unit SVD, phase-fixed) so
/// the output is deterministic.
///
/// Needs 1e-6 < p < 1 − 1e-6 (ConfigError) and dN ≤ 64 (NumericalError).
AttractorBasis solve_attractors_spectral(const Superoperator& phi);

/// Eigenvalues of (RC) ⊗ (RC)*: every possible attractor eigenvalue.
std::vector<Complex> coin_block_spectrum(const CoinOperator& c, const ReflectionOperator& r);

/// Attractors in two steps, without Φ:
///  1. the shift-consistent subspace S_K† X S_K = S_∅† X S_∅, imposed for
///     the full and every single-edge configuration (these generate all the
///     constraints), solved exactly as orbits of index pairs;
///  2. inside it, the blocks X^(s,t) must be λ-eigenvectors of (RC)⊗(RC)*.
AttractorBasis solve_attractors_twostep(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r);

/// Same as step 1 above but imposing every pair against the empty
/// configuration; exponential, used to check the generator shortcut.
AttractorBasis solve_attractors_twostep_all_configs(const PercolationGraph& g, const CoinOperator& c,
                                                    const ReflectionOperator& r, int cap = kDefaultEnumerationCap);

using AlphaSpec = std::variant<AlphaRational, double>;

/// Case tag of the closed-form basis for a 1D graph. Cycles need α as an
/// AlphaRational (ConfigError otherwise).
std::string catalog_case(GraphKind kind, int n, const AlphaSpec& alpha);

/// Closed-form attractors of C(α, β) with R = σ_x on the line or cycle.
/// Candidates are re-orthonormalized (HS Gram–Schmidt in the order
/// Z¹, Z², Z³, X, Y) and each is checked against Φ (residual < 1e-10).
/// Throws ConfigError for non-generic β and NumericalError for the 2-cycle
/// cases without a closed form (α/π with denominator 1 or 2).
AttractorBasis catalog_1d(GraphKind kind, int n, const AlphaSpec& alpha, double beta);

/// ρ(n) = Σ λⁿ Tr(X† ρ0) X over the basis. The result is checked to be
/// Hermitian with unit trace to 1e-10 and positive to -1e-8.
Matrix asymptotic_state(const AttractorBasis& basis, const Matrix& rho0, long long n);

/// Time average of the asymptotic orbit: the λ = 1 part of the projection.
Matrix asymptotic_average(const AttractorBasis& basis, const Matrix& rho0);

enum class AsymptoticKind { stationary, periodic, quasi_periodic };

struct Asymptotics {
  AsymptoticKind kind = AsymptoticKind::stationary;
  /// Minimal period for `periodic`, 1 for `stationary`, 0 otherwise.
  long long period = 0;
  /// Eigenvalues carrying a coefficient |Tr(X† ρ0)| > 1e-10.
  std::vector<Complex> active;
  /// Trace distance of the time-averaged limit from I/dN.
  double distance_to_mixed = 0.0;
};

std::string to_string(const Asymptotics& a);

/// Exact phases e^{±2iβ} of the family coin's non-trivial attractors, as
/// multiples of π.
std::vector<PiFraction> family_phase_candidates(PiFraction beta);

/// Stationary when only λ = 1 is active; periodic when every active λ equals
/// e^{iπ·q} for some q in `exact_phases` (within 1e-8); quasi-periodic
/// otherwise. Rationality is never guessed from floating point.
Asymptotics classify_asymptotics(const AttractorBasis& basis, const Matrix& rho0,
                                 std::span<const PiFraction> exact_phases = {});

/// max_i ‖Φ(X_i) − λ_i X_i‖_F.
double eigen_residual(const AttractorBasis& basis, const LocalChannel& channel);

/// max_{i,j} |Tr(X_i† X_j) − δ_ij|.
double orthonormality_defect(const AttractorBasis& basis);

/// Largest principal angle between matching eigenspaces of two bases;
/// π/2 when their eigenvalue sets or dimensions differ.
double max_subspace_angle(const AttractorBasis& a, const AttractorBasis& b);

}  // namespace percwalk
