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


#include "percwalk/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace percwalk::linalg {

Vector vec(const Matrix& m) {
  Vector v(m.size());
  const Eigen::Index n = m.cols();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < n; ++c) v(r * n + c) = m(r, c);
  }
  return v;
}

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) throw ConfigError("unvec: vector length is not n^2");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = v(r * n + c);
  }
  return m;
}

Complex hs_inner(const Matrix& a, const Matrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

double trace_norm(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix nullspace(const Matrix& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) >= tol) ++keep;
  return svd.matrixV().rightCols(n - keep);
}

Matrix column_span(const Matrix& a, double tol) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) >= tol) ++keep;
  return svd.matrixU().leftCols(keep);
}

double max_principal_angle(const Matrix& qa, const Matrix& qb) {
  if (qa.cols() != qb.cols()) return kPi / 2;
  if (qa.cols() == 0) return 0.0;
  const Matrix residual = qb - qa * (qa.adjoint() * qb);
  Eigen::BDCSVD<Matrix> svd(residual);
  const double s = std::min(1.0, svd.singularValues()(0));
  return std::asin(s);
}

std::vector<Matrix> gram_schmidt(const std::vector<Matrix>& candidates, double drop_tol) {
  std::vector<Matrix> basis;
  for (const auto& candidate : candidates) {
    Matrix v = candidate;
    // Two passes keep the result orthogonal to machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= hs_inner(q, v) * q;
    }
    const double norm = v.norm();
    if (norm < drop_tol) continue;
    basis.push_back(v / norm);
  }
  return basis;
}

Eigen::Index rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
  return r;
}

void fix_phase(Eigen::Ref<Vector> v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > vmax * (1.0 - 1e-6)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

}  // namespace percwalk::linalg
