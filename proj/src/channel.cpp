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


#include "percwalk/channel.hpp"

#include <memory>
#include <string>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "percwalk/linalg.hpp"
#include "percwalk/parallel.hpp"

namespace percwalk {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("percolation probability must lie in [0, 1], got " + std::to_string(p));
}

void check_inputs(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p) {
  check_probability(p);
  if (c.dimension() != g.degree()) throw ConfigError("coin dimension must equal the graph degree");
  if (r.dimension() != g.degree()) throw ConfigError("reflection dimension must equal the graph degree");
}

void check_operator(const PercolationGraph& g, const Matrix& rho) {
  if (rho.rows() != g.dimension() || rho.cols() != g.dimension()) {
    throw ConfigError("operator is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) + ", expected " +
                      std::to_string(g.dimension()) + "x" + std::to_string(g.dimension()));
  }
}

// (I ⊗ C) ρ (I ⊗ C)†, block by block.
Matrix coin_conjugate(const Matrix& coin, const Matrix& rho) {
  const Eigen::Index d = coin.rows();
  const Eigen::Index blocks = rho.rows() / d;
  Matrix left(rho.rows(), rho.cols());
  for (Eigen::Index v = 0; v < blocks; ++v) left.middleRows(v * d, d).noalias() = coin * rho.middleRows(v * d, d);
  Matrix out(rho.rows(), rho.cols());
  const Matrix coin_adj = coin.adjoint();
  for (Eigen::Index v = 0; v < blocks; ++v) out.middleCols(v * d, d).noalias() = left.middleCols(v * d, d) * coin_adj;
  return out;
}

struct WeightedUnitary {
  double weight;
  SparseMatrix unitary;
};

std::vector<WeightedUnitary> kraus_terms(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r,
                                         double p, int cap) {
  std::vector<WeightedUnitary> terms;
  for (const auto& k : enumerate_configs(g, cap)) {
    const double w = config_probability(g, k, p);
    if (w == 0.0) continue;
    terms.push_back({w, walk_unitary(step_operator(g, k, r), c).sparse()});
  }
  return terms;
}

Matrix apply_terms(const std::vector<WeightedUnitary>& terms, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& [w, u] : terms) {
    const Matrix left = u * rho;
    out.noalias() += w * (left * u.adjoint());
  }
  return out;
}

}  // namespace

Matrix apply_channel_bruteforce(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                                const Matrix& rho, int cap) {
  check_inputs(g, c, r, p);
  check_operator(g, rho);
  return apply_terms(kraus_terms(g, c, r, p, cap), rho);
}

Matrix Superoperator::apply(const Matrix& x) const {
  if (x.rows() != operator_dim_ || x.cols() != operator_dim_) throw ConfigError("superoperator applied to operator of wrong size");
  const Vector out = matrix_ * linalg::vec(x);
  return linalg::unvec(out, operator_dim_);
}

LocalChannel::LocalChannel(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p)
    : graph_(g), coin_(c), reflection_(r), p_(p) {
  check_inputs(g, c, r, p);
  const int dim = g.dimension();
  const int d = g.degree();
  std::vector<std::vector<int>> present_into(static_cast<std::size_t>(dim));
  std::vector<int> absent_into(static_cast<std::size_t>(dim), -1);
  for (int a = 0; a < g.vertex_count(); ++a) {
    for (int dir = 0; dir < d; ++dir) {
      const int from = g.index(a, dir);
      if (g.edge(a, dir) != kNoEdge) present_into[static_cast<std::size_t>(g.index(g.neighbor(a, dir), dir))].push_back(from);
      absent_into[static_cast<std::size_t>(g.index(a, r.apply(dir)))] = from;
    }
  }
  auto edge_of = [&](int state) { return g.edge(state / d, state % d); };
  rules_.resize(static_cast<std::size_t>(dim));
  for (int row = 0; row < dim; ++row) {
    auto& rule = rules_[static_cast<std::size_t>(row)];
    const auto& present = present_into[static_cast<std::size_t>(row)];
    rule.absent_src = absent_into[static_cast<std::size_t>(row)];
    rule.edge = edge_of(rule.absent_src);
    if (rule.edge == kNoEdge) {
      if (!present.empty()) local_ = false;
    } else if (present.size() == 1 && edge_of(present.front()) == rule.edge) {
      rule.present_src = present.front();
    } else {
      local_ = false;
    }
  }
}

template <typename Visit>
void LocalChannel::for_each_term(int r1, int r2, Visit&& visit) const {
  const RowRule& a = rules_[static_cast<std::size_t>(r1)];
  const RowRule& b = rules_[static_cast<std::size_t>(r2)];
  const double p = p_;
  const double q = 1.0 - p_;
  if (a.edge == kNoEdge && b.edge == kNoEdge) {
    visit(a.absent_src, b.absent_src, 1.0);
  } else if (a.edge == kNoEdge) {
    visit(a.absent_src, b.present_src, p);
    visit(a.absent_src, b.absent_src, q);
  } else if (b.edge == kNoEdge) {
    visit(a.present_src, b.absent_src, p);
    visit(a.absent_src, b.absent_src, q);
  } else if (a.edge == b.edge) {
    // One shared edge: only matched presence/absence pairs occur.
    visit(a.present_src, b.present_src, p);
    visit(a.absent_src, b.absent_src, q);
  } else {
    visit(a.present_src, b.present_src, p * p);
    visit(a.present_src, b.absent_src, p * q);
    visit(a.absent_src, b.present_src, q * p);
    visit(a.absent_src, b.absent_src, q * q);
  }
}

Matrix LocalChannel::coin_conjugate(const Matrix& rho) const { return percwalk::coin_conjugate(coin_.matrix(), rho); }

Matrix LocalChannel::apply(const Matrix& rho, int workers) const {
  check_operator(graph_, rho);
  if (!local_) return apply_channel_bruteforce(graph_, coin_, reflection_, p_, rho);
  const Matrix mixed = coin_conjugate(rho);
  const int dim = graph_.dimension();
  Matrix out(dim, dim);
  parallel_for(static_cast<std::size_t>(dim), workers, [&](std::size_t begin, std::size_t end) {
    for (auto r1 = static_cast<int>(begin); r1 < static_cast<int>(end); ++r1) {
      for (int r2 = 0; r2 < dim; ++r2) {
        Complex acc(0.0);
        for_each_term(r1, r2, [&](int x, int y, double w) { acc += w * mixed(x, y); });
        out(r1, r2) = acc;
      }
    }
  });
  return out;
}

Superoperator LocalChannel::superoperator() const {
  const int dim = graph_.dimension();
  const int d = graph_.degree();
  const auto big = static_cast<Eigen::Index>(dim) * dim;
  SparseMatrix m(big, big);
  if (!local_) {
    Matrix dense = Matrix::Zero(big, big);
    for (const auto& [w, u] : kraus_terms(graph_, coin_, reflection_, p_, kBruteForceEdgeCap)) {
      const Matrix ud(u);
      dense += w * Eigen::kroneckerProduct(ud, ud.conjugate()).eval();
    }
    m = dense.sparseView();
    return Superoperator(std::move(m), dim, p_, graph_.kind(), d);
  }
  const Matrix& cm = coin_.matrix();
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(big) * 4 * d * d);
  for (int r1 = 0; r1 < dim; ++r1) {
    for (int r2 = 0; r2 < dim; ++r2) {
      const Eigen::Index row = static_cast<Eigen::Index>(r1) * dim + r2;
      for_each_term(r1, r2, [&](int x, int y, double w) {
        if (w == 0.0) return;
        const int v1 = x / d, c1 = x % d;
        const int v2 = y / d, c2 = y % d;
        for (int b1 = 0; b1 < d; ++b1) {
          for (int b2 = 0; b2 < d; ++b2) {
            const Complex value = w * cm(c1, b1) * std::conj(cm(c2, b2));
            if (value == Complex(0.0)) continue;
            const Eigen::Index col = static_cast<Eigen::Index>(v1 * d + b1) * dim + (v2 * d + b2);
            triplets.emplace_back(row, col, value);
          }
        }
      });
    }
  }
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Superoperator(std::move(m), dim, p_, graph_.kind(), d);
}

Matrix apply_channel_local(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                           const Matrix& rho) {
  return LocalChannel(g, c, r, p).apply(rho);
}

Superoperator build_superoperator(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p) {
  if (g.dimension() > kMaxSuperoperatorDim) {
    throw NumericalError("superoperator guard: dN = " + std::to_string(g.dimension()) + " exceeds " +
                         std::to_string(kMaxSuperoperatorDim));
  }
  return LocalChannel(g, c, r, p).superoperator();
}

EvolveMethod parse_evolve_method(std::string_view name) {
  if (name == "local") return EvolveMethod::local;
  if (name == "bruteforce") return EvolveMethod::bruteforce;
  if (name == "matrix") return EvolveMethod::matrix;
  throw ConfigError("unknown evolution method '" + std::string(name) + "' (expected local, bruteforce or matrix)");
}

const char* to_string(EvolveMethod method) {
  switch (method) {
    case EvolveMethod::local:
      return "local";
    case EvolveMethod::bruteforce:
      return "bruteforce";
    case EvolveMethod::matrix:
      return "matrix";
  }
  return "local";
}

void evolve_visit(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                  const DensityMatrix& rho0, int n_steps, EvolveMethod method, const EvolveOptions& options,
                  const std::function<void(int, const Matrix&)>& visit) {
  check_inputs(g, c, r, p);
  check_operator(g, rho0.matrix());
  if (n_steps < 0) throw ConfigError("number of steps must be non-negative");
  std::function<Matrix(const Matrix&)> step;
  switch (method) {
    case EvolveMethod::local: {
      auto channel = std::make_shared<LocalChannel>(g, c, r, p);
      step = [channel, workers = options.workers](const Matrix& x) { return channel->apply(x, workers); };
      break;
    }
    case EvolveMethod::bruteforce: {
      auto terms = std::make_shared<std::vector<WeightedUnitary>>(kraus_terms(g, c, r, p, options.enumeration_cap));
      step = [terms](const Matrix& x) { return apply_terms(*terms, x); };
      break;
    }
    case EvolveMethod::matrix: {
      auto phi = std::make_shared<Superoperator>(build_superoperator(g, c, r, p));
      step = [phi](const Matrix& x) { return phi->apply(x); };
      break;
    }
  }
  Matrix rho = rho0.matrix();
  visit(0, rho);
  for (int t = 1; t <= n_steps; ++t) {
    rho = step(rho);
    DensityMatrix::validate(rho, options.check_positivity);
    visit(t, rho);
  }
}

Trajectory evolve(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                  const DensityMatrix& rho0, int n_steps, EvolveMethod method, const EvolveOptions& options) {
  Trajectory out;
  out.states.reserve(static_cast<std::size_t>(std::max(n_steps, 0)) + 1);
  evolve_visit(g, c, r, p, rho0, n_steps, method, options,
               [&](int, const Matrix& rho) { out.states.emplace_back(rho, false); });
  return out;
}

namespace {

using StepSums = std::vector<Matrix>;

void add_into(StepSums& acc, const StepSums& other) {
  for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += other[t];
}

}  // namespace

Trajectory monte_carlo_evolve(const PercolationGraph& g, const CoinOperator& c, const ReflectionOperator& r, double p,
                              const DensityMatrix& rho0, int n_steps, int n_traj, std::uint64_t seed, int workers) {
  check_inputs(g, c, r, p);
  check_operator(g, rho0.matrix());
  if (n_traj < 1) throw ConfigError("Monte Carlo needs at least one trajectory");
  if (n_steps < 0) throw ConfigError("number of steps must be non-negative");
  const int dim = g.dimension();
  const auto steps = static_cast<std::size_t>(n_steps) + 1;

  auto run_chunk = [&](int chunk) {
    StepSums acc(steps, Matrix::Zero(dim, dim));
    const int first = chunk * kMonteCarloChunk;
    const int last = std::min(n_traj, first + kMonteCarloChunk);
    for (int i = first; i < last; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      Matrix rho = rho0.matrix();
      acc[0] += rho;
      for (std::size_t t = 1; t < steps; ++t) {
        const StepOperator s = step_operator(g, sample_config(g, p, rng), r);
        const Matrix mixed = coin_conjugate(c.matrix(), rho);
        for (int x = 0; x < dim; ++x) {
          for (int y = 0; y < dim; ++y) rho(s.target(x), s.target(y)) = mixed(x, y);
        }
        acc[t] += rho;
      }
    }
    return acc;
  };

  // Binary-counter pairwise reduction: the tree shape depends only on the
  // number of chunks, never on which worker finished first.
  struct Node {
    int level;
    StepSums sums;
  };
  std::vector<Node> stack;
  auto push = [&](StepSums sums) {
    stack.push_back({0, std::move(sums)});
    while (stack.size() >= 2 && stack[stack.size() - 1].level == stack[stack.size() - 2].level) {
      Node right = std::move(stack.back());
      stack.pop_back();
      add_into(stack.back().sums, right.sums);
      ++stack.back().level;
    }
  };

  const int chunks = (n_traj + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const int batch = std::max(1, workers);
  for (int start = 0; start < chunks; start += batch) {
    const int count = std::min(batch, chunks - start);
    std::vector<StepSums> results(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) results[k] = run_chunk(start + static_cast<int>(k));
    });
    for (auto& res : results) push(std::move(res));
  }
  StepSums total = std::move(stack.back().sums);
  stack.pop_back();
  while (!stack.empty()) {
    StepSums left = std::move(stack.back().sums);
    stack.pop_back();
    add_into(left, total);
    total = std::move(left);
  }

  Trajectory out;
  out.states.reserve(steps);
  for (auto& sum : total) out.states.emplace_back(sum / static_cast<double>(n_traj), false);
  return out;
}

}  // namespace percwalk
