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

#include <vector>

#include "percwalk/core.hpp"

// Small dense linear-algebra helpers shared by the channel, solver and
// analysis modules. Operators are vectorized row-major throughout:
// vec(X)[r * n + c] = X(r, c), so vec(A X B) = (A ⊗ Bᵀ) vec(X).
namespace percwalk::linalg {

Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index n);

/// Hilbert–Schmidt inner product Tr(A† B).
Complex hs_inner(const Matrix& a, const Matrix& b);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Orthonormal basis (columns) of the null space of `a`: right singular
/// vectors whose singular value is below `tol`.
Matrix nullspace(const Matrix& a, double tol);

/// Orthonormal basis of the column span of `a`, dropping directions with
/// singular value below `tol`.
Matrix column_span(const Matrix& a, double tol);

/// Largest principal angle (radians) between the spans of two matrices with
/// orthonormal columns. Returns π/2 when the dimensions differ.
double max_principal_angle(const Matrix& qa, const Matrix& qb);

/// Modified Gram–Schmidt under the HS inner product. Candidates whose residual
/// norm falls below `drop_tol` are discarded; order is preserved.
std::vector<Matrix> gram_schmidt(const std::vector<Matrix>& candidates, double drop_tol = 1e-10);

/// Numerical rank from singular values, relative to the largest one.
Eigen::Index rank(const Matrix& a, double rel_tol);

/// Rotates the global phase of `v` so that its first entry of (near) maximal
/// magnitude is real and positive.
void fix_phase(Eigen::Ref<Vector> v);

}  // namespace percwalk::linalg
