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

#include <optional>
#include <utility>
#include <vector>

#include "percwalk/core.hpp"
#include "percwalk/graph.hpp"

namespace percwalk {

/// Coin acting on the d-dimensional direction space.
class CoinOperator {
 public:
  /// C(α, β) = [[i e^{-iα} sin β, cos β], [cos β, i e^{iα} sin β]].
  /// Throws ConfigError when cos β vanishes (the degenerate β = π/2 coin).
  static CoinOperator family(double alpha, double beta);
  /// C(π/2, π/4).
  static CoinOperator hadamard();
  /// Any unitary matrix; throws ConfigError if ‖C†C − I‖_max ≥ 1e-12.
  static CoinOperator from_matrix(Matrix m);

  const Matrix& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  /// (α, β) when built from the family.
  const std::optional<std::pair<double, double>>& family_params() const { return params_; }

 private:
  Matrix matrix_;
  std::optional<std::pair<double, double>> params_;
};

/// Permutation R of the direction labels applied when the needed edge is
/// missing: R|c⟩ = |perm[c]⟩.
class ReflectionOperator {
 public:
  static ReflectionOperator sigma_x();
  static ReflectionOperator from_permutation(std::vector<int> perm);
  /// σ_x for d = 2; other degrees need an explicit permutation.
  static ReflectionOperator default_for(int d);

  int dimension() const { return static_cast<int>(perm_.size()); }
  int apply(int c) const { return perm_[static_cast<std::size_t>(c)]; }
  const std::vector<int>& permutation() const { return perm_; }
  int trace() const;
  Matrix matrix() const;

 private:
  std::vector<int> perm_;
};

/// Shift for one edge configuration, stored as the image of every basis
/// state: |j⟩ ↦ |target(j)⟩. Always a permutation.
class StepOperator {
 public:
  StepOperator(std::vector<int> target, EdgeConfig config)
      : target_(std::move(target)), config_(std::move(config)) {}

  int dimension() const { return static_cast<int>(target_.size()); }
  int target(int column) const { return target_[static_cast<std::size_t>(column)]; }
  const std::vector<int>& targets() const { return target_; }
  const EdgeConfig& config() const { return config_; }
  SparseMatrix sparse() const;
  Matrix dense() const;

 private:
  std::vector<int> target_;
  EdgeConfig config_;
};

/// |a,c⟩ ↦ |a⊕c, c⟩ when edge(a,c) ∈ k, otherwise |a, R c⟩. Throws
/// NumericalError when the result is not a permutation, i.e. R does not
/// match the graph's direction labeling.
StepOperator step_operator(const PercolationGraph& g, const EdgeConfig& k, const ReflectionOperator& r);

/// U_K = S_K · (I_P ⊗ C), kept sparse (d nonzeros per column).
class WalkUnitary {
 public:
  WalkUnitary(SparseMatrix m, EdgeConfig config) : matrix_(std::move(m)), config_(std::move(config)) {}
  const SparseMatrix& sparse() const { return matrix_; }
  Matrix dense() const { return Matrix(matrix_); }
  const EdgeConfig& config() const { return config_; }

 private:
  SparseMatrix matrix_;
  EdgeConfig config_;
};

WalkUnitary walk_unitary(const StepOperator& s, const CoinOperator& c);

/// Eigenvalues of R·C sorted by phase in [0, 2π).
std::vector<Complex> rc_spectrum(const CoinOperator& c, const ReflectionOperator& r);

/// Hermitian, trace-one, positive semidefinite state on position ⊗ coin,
/// index(a, b) = a·d + b.
class DensityMatrix {
 public:
  /// Validates Hermiticity and trace to 1e-12; positivity (λ_min ≥ -1e-10)
  /// only when `check_positivity` is set, as it costs an eigendecomposition.
  explicit DensityMatrix(Matrix m, bool check_positivity = true);

  const Matrix& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }

  /// Throws NumericalError describing the first violated invariant.
  static void validate(const Matrix& m, bool check_positivity, double tol = 1e-12, double psd_tol = 1e-10);

 private:
  Matrix matrix_;
};

/// |x0⟩⟨x0| ⊗ (P |ψ⟩⟨ψ| + (1−P)/2 I) with |ψ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
DensityMatrix localized_initial_state(const PercolationGraph& g, int x0, double theta, double phi, double purity_weight);

/// ‖M†M − I‖_max.
double unitarity_defect(const Matrix& m);

}  // namespace percwalk
