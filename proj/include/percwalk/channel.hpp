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

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "percwalk/core.hpp"
#include "percwalk/graph.hpp"
#include "percwalk/walk.hpp"

namespace percwalk {

/// Largest edge count the brute-force channel accepts by default: 2^19
/// Kraus terms. Enumeration alone goes up to kDefaultEnumerationCap.
inline constexpr int kBruteForceEdgeCap = 19;

/// Φ(ρ) = Σ_K π_K(p) U_K ρ U_K† by summing every configuration. Exponential
/// in |E|; throws NumericalError past `cap` edges. Zero-weight configurations
/// are skipped.
Matrix apply_channel_bruteforce(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                                const Matrix& rho, int cap = kBruteForceEdgeCap);

/// Explicit sparse matrix of Φ acting on row-major vectorized operators,
/// vec-index(row, col) = row·dN + col.
class Superoperator {
 public:
  Superoperator(SparseMatrix m, int operator_dim, double p, GraphKind kind, int degree)
      : matrix_(std::move(m)), operator_dim_(operator_dim), p_(p), kind_(kind), degree_(degree) {}

  const SparseMatrix& sparse() const { return matrix_; }
  Matrix dense() const { return Matrix(matrix_); }
  /// dN; the matrix itself is (dN)² × (dN)².
  int operator_dimension() const { return operator_dim_; }
  double p() const { return p_; }
  GraphKind graph_kind() const { return kind_; }
  int degree() const { return degree_; }

  Matrix apply(const Matrix& x) const;

 private:
  SparseMatrix matrix_;
  int operator_dim_;
  double p_;
  GraphKind kind_;
  int degree_;
};

/// The percolation channel evaluated by local-edge marginalization.
///
/// Every output row |s,c⟩ of U_K is fed by exactly one input state, chosen by
/// the presence of a single governing edge: present → the neighbor that
/// shifts into |s,c⟩, absent → the reflected state at s. So
///
///   Φ(ρ)(r1, r2) = Σ_{branch states} w · ρ̃(src(r1), src(r2)),  ρ̃ = (I⊗C) ρ (I⊗C)†,
///
/// with 4 weighted terms when the two governing edges differ and 2 matched
/// terms when they coincide. Cost per step is O((dN)² + N² d³) instead of
/// O(2^|E|). The branch table is built once per (graph, coin, R, p).
///
/// If some row is not governed by a single edge (an R that couples several
/// edges), the channel falls back to brute-force enumeration.
class LocalChannel {
 public:
  LocalChannel(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p);

  Matrix apply(const Matrix& rho, int workers = 1) const;
  Superoperator superoperator() const;

  bool is_local() const { return local_; }
  double p() const { return p_; }
  const PercolationGraph& graph() const { return graph_; }

 private:
  struct RowRule {
    EdgeId edge = kNoEdge;  // kNoEdge: permanently absent, only `absent_src` contributes
    int present_src = -1;
    int absent_src = -1;
  };
  template <typename Visit>
  void for_each_term(int r1, int r2, Visit&& visit) const;
  Matrix coin_conjugate(const Matrix& rho) const;

  PercolationGraph graph_;
  CoinOperator coin_;
  ReflectionOperator reflection_;
  double p_;
  bool local_ = true;
  std::vector<RowRule> rules_;
};

Matrix apply_channel_local(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                           const Matrix& rho);

inline constexpr int kMaxSuperoperatorDim = 128;

/// Φ as an explicit sparse matrix; throws NumericalError when dN > 128.
Superoperator build_superoperator(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p);

enum class EvolveMethod { local, bruteforce, matrix };

EvolveMethod parse_evolve_method(std::string_view name);
const char* to_string(EvolveMethod method);

struct EvolveOptions {
  int workers = 1;
  /// Eigendecomposition per step; O((dN)³).
  bool check_positivity = false;
  int enumeration_cap = kBruteForceEdgeCap;
};

struct Trajectory {
  std::vector<DensityMatrix> states;
  int step_count() const { return static_cast<int>(states.size()) - 1; }
};

/// Low-memory evolution: calls visit(t, ρ(t)) for t = 0..n_steps without
/// storing the states. Every ρ(t) is validated as a density matrix.
void evolve_visit(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                  const DensityMatrix& rho0, int n_steps, EvolveMethod method, const EvolveOptions& options,
                  const std::function<void(int, const Matrix&)>& visit);

Trajectory evolve(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                  const DensityMatrix& rho0, int n_steps, EvolveMethod method, const EvolveOptions& options = {});

/// Trajectories per accumulation chunk; chunk sums are merged by a fixed
/// pairwise tree, so averages do not depend on the worker count.
inline constexpr int kMonteCarloChunk = 64;

/// Average of U_{K_t}···U_{K_1} ρ0 (···)† over `n_traj` sampled configuration
/// sequences. Trajectory i draws from Rng(derive_seed(seed, i)).
Trajectory monte_carlo_evolve(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                              const DensityMatrix& rho0, int n_steps, int n_traj, std::uint64_t seed, int workers = 1);

}  // namespace percwalk
