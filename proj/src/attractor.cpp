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


#include "percwalk/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "percwalk/linalg.hpp"

namespace percwalk {

namespace {

constexpr double kUnitCircleTol = 1e-8;
constexpr double kClusterTol = 1e-6;
constexpr double kMaxSolverDim = 64;

double phase_of(Complex z) {
  double a = std::arg(z);
  if (a < 0) a += 2 * kPi;
  if (a > 2 * kPi - 1e-9) a = 0.0;
  return a;
}

// Groups values by phase; each group is a run of values within kClusterTol.
std::vector<std::vector<Complex>> cluster_by_phase(std::vector<Complex> values) {
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) { return phase_of(a) < phase_of(b); });
  std::vector<std::vector<Complex>> groups;
  for (Complex v : values) {
    if (!groups.empty() && std::abs(groups.back().front() - v) < kClusterTol) {
      groups.back().push_back(v);
    } else {
      groups.push_back({v});
    }
  }
  // The first and last group may both sit at phase ~0.
  if (groups.size() > 1 && std::abs(groups.front().front() - groups.back().front()) < kClusterTol) {
    groups.front().insert(groups.front().end(), groups.back().begin(), groups.back().end());
    groups.pop_back();
  }
  return groups;
}

Complex unit_mean(const std::vector<Complex>& group) {
  Complex sum = std::accumulate(group.begin(), group.end(), Complex(0.0));
  return sum / std::abs(sum);
}

// Deterministic basis of span(q): principal directions of the subspace under
// a fixed, strictly decreasing weighting of the matrix units, phase-fixed.
Matrix canonicalize(const Matrix& q) {
  if (q.cols() <= 1) {
    Matrix out = q;
    if (out.cols() == 1) {
      auto column = out.col(0);
      linalg::fix_phase(column);
    }
    return out;
  }
  Eigen::VectorXd weights(q.rows());
  for (Eigen::Index j = 0; j < q.rows(); ++j) weights(j) = 1.0 / (1.0 + static_cast<double>(j));
  const Matrix weighted = q.adjoint() * weights.asDiagonal();
  Eigen::BDCSVD<Matrix> svd(weighted, Eigen::ComputeFullU);
  Matrix out = q * svd.matrixU();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    auto column = out.col(c);
    linalg::fix_phase(column);
  }
  return out;
}

void append_items(AttractorBasis& basis, const Matrix& columns, Complex lambda, Eigen::Index dim) {
  const Matrix canon = canonicalize(columns);
  for (Eigen::Index c = 0; c < canon.cols(); ++c) {
    basis.items.push_back({lambda, linalg::unvec(canon.col(c), dim)});
  }
}

void sort_items(AttractorBasis& basis) {
  std::stable_sort(basis.items.begin(), basis.items.end(), [](const AttractorItem& a, const AttractorItem& b) {
    const double pa = phase_of(a.eigenvalue);
    const double pb = phase_of(b.eigenvalue);
    if (std::abs(pa - pb) < kClusterTol) return false;
    return pa < pb;
  });
}

void check_solver_probability(double p) {
  if (!(p > 1e-6 && p < 1.0 - 1e-6)) {
    throw ConfigError("attractor solvers need 1e-6 < p < 1 - 1e-6 (every configuration must occur); got p = " +
                      std::to_string(p));
  }
}

// Union-find over index pairs (i, j) ↦ i·D + j.
class PairOrbits {
 public:
  explicit PairOrbits(int dim) : dim_(dim), parent_(static_cast<std::size_t>(dim) * dim) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  /// X must satisfy X(perm i, perm j) = X(i, j).
  void impose(const std::vector<int>& perm) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) unite(i * dim_ + j, perm[static_cast<std::size_t>(i)] * dim_ + perm[static_cast<std::size_t>(j)]);
    }
  }

  /// Orbit index of every pair, numbered by first appearance.
  std::vector<int> labels(int& count) {
    std::vector<int> label(parent_.size(), -1);
    std::map<int, int> root_label;
    count = 0;
    for (std::size_t k = 0; k < parent_.size(); ++k) {
      const int root = find(static_cast<int>(k));
      auto [it, inserted] = root_label.emplace(root, count);
      if (inserted) ++count;
      label[k] = it->second;
    }
    return label;
  }

 private:
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

  int dim_;
  std::vector<int> parent_;
};

AttractorBasis twostep_with(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r,
                            const std::vector<EdgeConfig>& configs) {
  const int dim = g.dimension();
  if (dim > kMaxSolverDim) throw NumericalError("two-step solver guard: dN = " + std::to_string(dim) + " exceeds 64");
  if (c.dimension() != g.degree() || r.dimension() != g.degree()) {
    throw ConfigError("coin and reflection dimensions must equal the graph degree");
  }

  // Step 1: S_K† X S_K = S_∅† X S_∅  ⇔  X commutes with the permutation S_K S_∅†.
  const StepOperator empty = step_operator(g, EdgeConfig::empty(g), r);
  PairOrbits orbits(dim);
  std::vector<int> perm(static_cast<std::size_t>(dim));
  for (const auto& k : configs) {
    const StepOperator s = step_operator(g, k, r);
    for (int x = 0; x < dim; ++x) perm[static_cast<std::size_t>(empty.target(x))] = s.target(x);
    orbits.impose(perm);
  }
  int orbit_count = 0;
  const std::vector<int> label = orbits.labels(orbit_count);
  std::vector<double> orbit_size(static_cast<std::size_t>(orbit_count), 0.0);
  for (int l : label) orbit_size[static_cast<std::size_t>(l)] += 1.0;

  // Step 2: every block X^(s,t) is a λ-eigenvector of (RC) ⊗ (RC)*.
  const int d = g.degree();
  const int n = g.vertex_count();
  const Matrix rc = r.matrix() * c.matrix();
  const Matrix block_op = Eigen::kroneckerProduct(rc, rc.conjugate()).eval();
  Eigen::ComplexEigenSolver<Matrix> es(block_op, false);
  std::vector<Complex> candidates(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());

  AttractorBasis basis;
  for (const auto& group : cluster_by_phase(candidates)) {
    const Complex lambda = unit_mean(group);
    const Matrix shifted = block_op - lambda * Matrix::Identity(block_op.rows(), block_op.cols());
    const Matrix v = linalg::nullspace(shifted, 1e-9);
    const Eigen::Index k = v.cols();
    if (k == 0) continue;
    // Overlaps between the orbit indicators and the block-eigenvector basis.
    Matrix overlap = Matrix::Zero(orbit_count, static_cast<Eigen::Index>(n) * n * k);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const int o = label[static_cast<std::size_t>(i * dim + j)];
        const int s = i / d, a = i % d, t = j / d, b = j % d;
        const double scale = 1.0 / std::sqrt(orbit_size[static_cast<std::size_t>(o)]);
        for (Eigen::Index q = 0; q < k; ++q) overlap(o, (s * n + t) * k + q) += scale * v(a * d + b, q);
      }
    }
    Eigen::BDCSVD<Matrix> svd(overlap, Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    Eigen::Index common = 0;
    while (common < sigma.size() && sigma(common) > 1.0 - 1e-9) ++common;
    if (common == 0) continue;
    const Matrix w = svd.matrixV().leftCols(common);
    Matrix columns(static_cast<Eigen::Index>(dim) * dim, common);
    for (Eigen::Index col = 0; col < common; ++col) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          const int s = i / d, a = i % d, t = j / d, b = j % d;
          Complex value(0.0);
          for (Eigen::Index q = 0; q < k; ++q) value += v(a * d + b, q) * w((s * n + t) * k + q, col);
          columns(static_cast<Eigen::Index>(i) * dim + j, col) = value;
        }
      }
    }
    append_items(basis, linalg::column_span(columns, 1e-8), lambda, dim);
  }
  sort_items(basis);
  return basis;
}

}  // namespace

std::vector<Complex> AttractorBasis::eigenvalues() const {
  std::vector<Complex> out;
  for (const auto& item : items) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](Complex z) { return std::abs(z - item.eigenvalue) < kClusterTol; });
    if (!seen) out.push_back(item.eigenvalue);
  }
  return out;
}

Matrix AttractorBasis::subspace(Complex lambda, double tol) const {
  std::vector<const Matrix*> picked;
  for (const auto& item : items) {
    if (std::abs(item.eigenvalue - lambda) < tol) picked.push_back(&item.matrix);
  }
  if (picked.empty()) return Matrix(0, 0);
  Matrix out(picked.front()->size(), static_cast<Eigen::Index>(picked.size()));
  for (std::size_t c = 0; c < picked.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = linalg::vec(*picked[c]);
  return out;
}

AttractorBasis solve_attractors_spectral(const Superoperator& phi) {
  check_solver_probability(phi.p());
  const int dim = phi.operator_dimension();
  if (dim > kMaxSolverDim) throw NumericalError("spectral solver guard: dN = " + std::to_string(dim) + " exceeds 64");
  const Matrix f = phi.dense();
  Eigen::ComplexEigenSolver<Matrix> es(f, false);
  std::vector<Complex> peripheral;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex z = es.eigenvalues()(i);
    if (std::abs(std::abs(z) - 1.0) < kUnitCircleTol) peripheral.push_back(z);
  }
  AttractorBasis basis;
  const Matrix identity = Matrix::Identity(f.rows(), f.cols());
  for (const auto& group : cluster_by_phase(peripheral)) {
    const Complex lambda = unit_mean(group);
    const Matrix q = linalg::nullspace(f - lambda * identity, 1e-7);
    if (q.cols() == 0) throw NumericalError("unit-modulus eigenvalue without a numerical eigenspace");
    const Complex refined = (q.adjoint() * f * q).trace() / static_cast<double>(q.cols());
    append_items(basis, q, refined, dim);
  }
  sort_items(basis);
  return basis;
}

std::vector<Complex> coin_block_spectrum(const CoinOperator& c, const ReflectionOperator& r) {
  if (c.dimension() != r.dimension()) throw ConfigError("coin and reflection dimensions differ");
  const Matrix rc = r.matrix() * c.matrix();
  Eigen::ComplexEigenSolver<Matrix> es(Eigen::kroneckerProduct(rc, rc.conjugate()).eval(), false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return phase_of(a) < phase_of(b); });
  return out;
}

AttractorBasis solve_attractors_twostep(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r) {
  std::vector<EdgeConfig> configs{EdgeConfig::full(g)};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EdgeConfig k = EdgeConfig::empty(g);
    k.set(e, true);
    configs.push_back(std::move(k));
  }
  return twostep_with(g, c, r, configs);
}

AttractorBasis solve_attractors_twostep_all_configs(const PercolationGraph& g, const CoinOperator& c,
                                                    const ReflectionOperator& r, int cap) {
  return twostep_with(g, c, r, enumerate_configs(g, cap));
}

namespace {

std::optional<std::string> cycle_case(int n, const AlphaRational& alpha) {
  if (n == 2) {
    if (alpha.den <= 2) return std::nullopt;
    return "cycle-N2";
  }
  if (n % 2 == 1) return (n % alpha.den == 0) ? "cycle-odd-special" : "cycle-generic";
  return ((alpha.num * n) % (2 * alpha.den) == 0) ? "cycle-even-special" : "cycle-generic";
}

double alpha_radians(const AlphaSpec& alpha) {
  return std::visit([](const auto& a) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(a)>, double>) {
      return a;
    } else {
      return a.radians();
    }
  }, alpha);
}

}  // namespace

std::string catalog_case(GraphKind kind, int n, const AlphaSpec& alpha) {
  if (kind == GraphKind::line) return "line";
  if (kind != GraphKind::cycle) throw ConfigError("closed-form attractors exist only for the line and the cycle");
  const auto* exact = std::get_if<AlphaRational>(&alpha);
  if (exact == nullptr) {
    throw ConfigError("cycle case dispatch needs alpha as a rational multiple of pi (--alpha-pi l/m)");
  }
  const auto tag = cycle_case(n, *exact);
  if (!tag) {
    throw NumericalError("no closed form for the 2-cycle at alpha = " + exact->str() +
                         " pi; use the spectral or two-step solver");
  }
  return *tag;
}

AttractorBasis catalog_1d(GraphKind kind, int n, const AlphaSpec& alpha, double beta) {
  if (n < 2) throw ConfigError("graph needs at least 2 vertices");
  if (std::abs(std::sin(beta)) <= 1e-9 || std::abs(std::cos(beta)) <= 1e-9) {
    throw ConfigError("closed-form attractors need a generic beta (sin beta and cos beta nonzero)");
  }
  const std::string tag = catalog_case(kind, n, alpha);
  const double a = alpha_radians(alpha);
  const int dim = 2 * n;
  const Complex i(0.0, 1.0);

  // Entries depend on δ = s − t − c + d. Z² and Z³ share the 1/(√2 N) prefactor.
  Matrix x(dim, dim), z2(dim, dim), z3(dim, dim);
  const double pref = 1.0 / (std::sqrt(2.0) * n);
  for (int s = 0; s < n; ++s) {
    for (int c = 0; c < 2; ++c) {
      for (int t = 0; t < n; ++t) {
        for (int d = 0; d < 2; ++d) {
          const int delta = s - t - c + d;
          const bool even = (delta % 2) == 0;
          const int row = 2 * s + c, col = 2 * t + d;
          x(row, col) = std::exp(i * (a * delta)) * (((t + d) % 2 == 0) ? 1.0 : -1.0) / (2.0 * n);
          z2(row, col) = even ? Complex(0.0) : pref * std::exp(i * (a * (delta - 1)));
          z3(row, col) = even ? pref * std::exp(i * (a * delta)) : Complex(0.0);
        }
      }
    }
  }
  const Matrix z1 = Matrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));

  std::vector<Matrix> stationary{z1};
  bool oscillating = false;
  if (tag == "line" || tag == "cycle-even-special") {
    stationary.push_back(z2);
    stationary.push_back(z3);
    oscillating = true;
  } else if (tag == "cycle-odd-special") {
    stationary.push_back((z2 + std::exp(i * (a * (n - 1))) * z3) / std::sqrt(2.0));
  } else if (tag == "cycle-N2") {
    Matrix swap = Matrix::Zero(dim, dim);
    swap.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
    swap.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
    stationary.push_back(swap / 2.0);
  }

  AttractorBasis basis;
  basis.case_tag = tag;
  for (auto& m : linalg::gram_schmidt(stationary)) basis.items.push_back({Complex(1.0), std::move(m)});
  if (oscillating) {
    const Matrix xn = x / x.norm();
    basis.items.push_back({std::exp(2.0 * i * beta), xn});
    basis.items.push_back({std::exp(-2.0 * i * beta), xn.adjoint()});
  }
  sort_items(basis);

  const PercolationGraph g = kind == GraphKind::line ? PercolationGraph::make_line(n) : PercolationGraph::make_cycle(n);
  const LocalChannel channel(g, CoinOperator::family(a, beta), ReflectionOperator::sigma_x(), 0.5);
  const double residual = eigen_residual(basis, channel);
  if (residual > 1e-10) {
    throw NumericalError("closed-form attractor failed eigen-validation (residual " + std::to_string(residual) + ")");
  }
  return basis;
}

Matrix asymptotic_state(const AttractorBasis& basis, const Matrix& rho0, long long n) {
  if (basis.items.empty()) throw ConfigError("empty attractor basis");
  Matrix out = Matrix::Zero(rho0.rows(), rho0.cols());
  for (const auto& item : basis.items) {
    const Complex phase = std::polar(1.0, static_cast<double>(n) * std::arg(item.eigenvalue));
    out += phase * linalg::hs_inner(item.matrix, rho0) * item.matrix;
  }
  DensityMatrix::validate(out, true, 1e-10, 1e-8);
  return out;
}

Matrix asymptotic_average(const AttractorBasis& basis, const Matrix& rho0) {
  Matrix out = Matrix::Zero(rho0.rows(), rho0.cols());
  for (const auto& item : basis.items) {
    if (std::abs(item.eigenvalue - 1.0) < kUnitCircleTol) out += linalg::hs_inner(item.matrix, rho0) * item.matrix;
  }
  return out;
}

std::string to_string(const Asymptotics& a) {
  switch (a.kind) {
    case AsymptoticKind::stationary:
      return "stationary";
    case AsymptoticKind::periodic:
      return "periodic(" + std::to_string(a.period) + ")";
    case AsymptoticKind::quasi_periodic:
      return "quasi-periodic";
  }
  return "quasi-periodic";
}

std::vector<PiFraction> family_phase_candidates(PiFraction beta) {
  return {PiFraction::make(2 * beta.num, beta.den), PiFraction::make(-2 * beta.num, beta.den)};
}

Asymptotics classify_asymptotics(const AttractorBasis& basis, const Matrix& rho0, std::span<const PiFraction> exact_phases) {
  Asymptotics out;
  for (const auto& item : basis.items) {
    if (std::abs(linalg::hs_inner(item.matrix, rho0)) <= 1e-10) continue;
    const bool seen = std::any_of(out.active.begin(), out.active.end(),
                                  [&](Complex z) { return std::abs(z - item.eigenvalue) < kClusterTol; });
    if (!seen) out.active.push_back(item.eigenvalue);
  }
  const Matrix average = asymptotic_average(basis, rho0);
  const auto dim = average.rows();
  out.distance_to_mixed = 0.5 * linalg::trace_norm(average - Matrix::Identity(dim, dim) / static_cast<double>(dim));

  long long period = 1;
  for (Complex lambda : out.active) {
    if (std::abs(lambda - 1.0) < kUnitCircleTol) continue;
    const PiFraction* match = nullptr;
    for (const auto& q : exact_phases) {
      if (std::abs(lambda - std::polar(1.0, q.radians())) < kUnitCircleTol) {
        match = &q;
        break;
      }
    }
    if (match == nullptr) {
      out.kind = AsymptoticKind::quasi_periodic;
      out.period = 0;
      return out;
    }
    // λ = e^{iπ num/den}; λ^T = 1 first at T = 2 den / gcd(num, 2 den).
    const long long two_den = 2 * match->den;
    const long long t = two_den / std::gcd(std::llabs(match->num), two_den);
    period = std::lcm(period, t);
  }
  out.kind = period == 1 ? AsymptoticKind::stationary : AsymptoticKind::periodic;
  out.period = period;
  return out;
}

double eigen_residual(const AttractorBasis& basis, const LocalChannel& channel) {
  double worst = 0.0;
  for (const auto& item : basis.items) {
    worst = std::max(worst, (channel.apply(item.matrix) - item.eigenvalue * item.matrix).norm());
  }
  return worst;
}

double orthonormality_defect(const AttractorBasis& basis) {
  double worst = 0.0;
  for (std::size_t a = 0; a < basis.items.size(); ++a) {
    for (std::size_t b = 0; b < basis.items.size(); ++b) {
      const Complex ip = linalg::hs_inner(basis.items[a].matrix, basis.items[b].matrix);
      worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double max_subspace_angle(const AttractorBasis& a, const AttractorBasis& b) {
  if (a.dimension() != b.dimension()) return kPi / 2;
  const auto la = a.eigenvalues();
  const auto lb = b.eigenvalues();
  if (la.size() != lb.size()) return kPi / 2;
  double worst = 0.0;
  for (Complex lambda : la) {
    const bool present = std::any_of(lb.begin(), lb.end(), [&](Complex z) { return std::abs(z - lambda) < kClusterTol; });
    if (!present) return kPi / 2;
    worst = std::max(worst, linalg::max_principal_angle(a.subspace(lambda), b.subspace(lambda)));
  }
  return worst;
}

}  // namespace percwalk
