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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "percwalk/walk.hpp"
#include "test_support.hpp"

using namespace percwalk;
using percwalk::testing::max_abs;

namespace {

// Reference step operator written directly from the rule, as a dense matrix.
Matrix reference_step(const PercolationGraph& g, const EdgeConfig& k, const ReflectionOperator& r) {
  Matrix s = Matrix::Zero(g.dimension(), g.dimension());
  for (int a = 0; a < g.vertex_count(); ++a) {
    for (int c = 0; c < g.degree(); ++c) {
      if (k.contains(g.edge(a, c))) {
        s(g.index(g.neighbor(a, c), c), g.index(a, c)) = 1.0;
      } else {
        s(g.index(a, r.apply(c)), g.index(a, c)) = 1.0;
      }
    }
  }
  return s;
}

Matrix kron_identity(int n, const Matrix& m) {
  Matrix out = Matrix::Zero(n * m.rows(), n * m.cols());
  for (int a = 0; a < n; ++a) out.block(a * m.rows(), a * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

TEST_CASE("coin family entries") {
  const double alpha = 0.7, beta = 0.4;
  const Matrix c = CoinOperator::family(alpha, beta).matrix();
  const Complex i(0, 1);
  CHECK(std::abs(c(0, 0) - i * std::exp(-i * alpha) * std::sin(beta)) < 1e-15);
  CHECK(std::abs(c(0, 1) - std::cos(beta)) < 1e-15);
  CHECK(std::abs(c(1, 0) - std::cos(beta)) < 1e-15);
  CHECK(std::abs(c(1, 1) - i * std::exp(i * alpha) * std::sin(beta)) < 1e-15);
}

TEST_CASE("family at (pi/2, pi/4) is the Hadamard coin") {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CHECK(max_abs(CoinOperator::family(kPi / 2, kPi / 4).matrix() - h) < 1e-15);
  CHECK(max_abs(CoinOperator::hadamard().matrix() - h) < 1e-15);
}

TEST_CASE("coin unitarity and rejection") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const auto c = CoinOperator::family(percwalk::testing::uniform(rng, -7, 7), percwalk::testing::uniform(rng, -7, 7) + 0.01);
    CHECK(unitarity_defect(c.matrix()) < 1e-12);
  }
  CHECK_THROWS_WITH_AS(CoinOperator::family(0.3, kPi / 2), doctest::Contains("degenerate"), ConfigError);
  CHECK_THROWS_AS(CoinOperator::family(0.3, 3 * kPi / 2 + 1e-12), ConfigError);
  Matrix bad(2, 2);
  bad << 1, 1, 0, 1;
  CHECK_THROWS_AS(CoinOperator::from_matrix(bad), ConfigError);
  CHECK(CoinOperator::family(kPi / 2, std::sqrt(2.0)).family_params().has_value());
}

TEST_CASE("rc spectrum is e^{+-i beta}") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const double alpha = percwalk::testing::uniform(rng, 0, 2 * kPi);
    const double beta = percwalk::testing::generic_beta(rng);
    const auto coin = CoinOperator::family(alpha, beta);
    const auto spectrum = rc_spectrum(coin, ReflectionOperator::sigma_x());
    REQUIRE(spectrum.size() == 2);
    // Closed form.
    for (Complex z : spectrum) {
      const double err = std::min(std::abs(z - std::polar(1.0, beta)), std::abs(z - std::polar(1.0, -beta)));
      CHECK(err < 1e-10);
    }
    CHECK(std::arg(spectrum[0] * spectrum[1]) == doctest::Approx(0.0).epsilon(1e-10));
    // Direct 2x2 eigensolve.
    Eigen::ComplexEigenSolver<Matrix> es(ReflectionOperator::sigma_x().matrix() * coin.matrix());
    for (Eigen::Index k = 0; k < 2; ++k) {
      const Complex z = es.eigenvalues()(k);
      CHECK(std::min(std::abs(z - spectrum[0]), std::abs(z - spectrum[1])) < 1e-10);
    }
  }
  const auto h = rc_spectrum(CoinOperator::family(1.3, kPi / 4), ReflectionOperator::sigma_x());
  CHECK(std::abs(h[0] - std::polar(1.0, kPi / 4)) < 1e-12);
  CHECK(std::abs(h[1] - std::polar(1.0, -kPi / 4)) < 1e-12);
}

TEST_CASE("step operator on the cycle") {
  const auto g = PercolationGraph::make_cycle(3);
  const auto r = ReflectionOperator::sigma_x();
  const auto full = step_operator(g, EdgeConfig::full(g), r);
  CHECK(full.target(g.index(0, 1)) == g.index(1, 1));
  CHECK(full.target(g.index(0, 0)) == g.index(2, 0));

  const auto empty = step_operator(g, EdgeConfig::empty(g), r);
  CHECK(max_abs(empty.dense() - kron_identity(3, r.matrix())) == 0.0);
}

TEST_CASE("step operator on the 2-line") {
  const auto g = PercolationGraph::make_line(2);
  EdgeConfig k = EdgeConfig::empty(g);
  k.set(0, true);
  const auto s = step_operator(g, k, ReflectionOperator::sigma_x());
  CHECK(s.target(g.index(0, 1)) == g.index(1, 1));
  CHECK(s.target(g.index(1, 0)) == g.index(0, 0));
  CHECK(s.target(g.index(0, 0)) == g.index(0, 1));
  CHECK(s.target(g.index(1, 1)) == g.index(1, 0));
}

TEST_CASE("full config on the 3-line moves |0,1> to |1,1>") {
  const auto g = PercolationGraph::make_line(3);
  const auto s = step_operator(g, EdgeConfig::full(g), ReflectionOperator::sigma_x());
  CHECK(s.target(g.index(0, 1)) == g.index(1, 1));
  CHECK(s.target(g.index(0, 0)) == g.index(0, 1));
}

TEST_CASE("step operators are exact permutations matching the rule") {
  for (const auto& g : {PercolationGraph::make_cycle(5), PercolationGraph::make_line(4), PercolationGraph::make_cycle(2)}) {
    for (const auto& k : enumerate_configs(g)) {
      const Matrix s = step_operator(g, k, ReflectionOperator::sigma_x()).dense();
      CHECK(max_abs(s - reference_step(g, k, ReflectionOperator::sigma_x())) == 0.0);
      for (Eigen::Index j = 0; j < s.cols(); ++j) {
        CHECK(s.col(j).cwiseAbs().sum() == 1.0);
        CHECK(s.row(j).cwiseAbs().sum() == 1.0);
      }
    }
  }
}

TEST_CASE("walk unitaries") {
  const auto g = PercolationGraph::make_cycle(6);
  const auto r = ReflectionOperator::sigma_x();
  const auto h = CoinOperator::hadamard();
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto k = sample_config(g, 0.5, rng);
    const Matrix u = walk_unitary(step_operator(g, k, r), h).dense();
    CHECK(unitarity_defect(u) < 1e-12);
    CHECK(max_abs(u - step_operator(g, k, r).dense() * kron_identity(6, h.matrix())) < 1e-15);
  }
  const auto identity = CoinOperator::from_matrix(Matrix::Identity(2, 2));
  const auto s = step_operator(g, EdgeConfig::full(g), r);
  CHECK(max_abs(walk_unitary(s, identity).dense() - s.dense()) == 0.0);
  const Matrix u_empty = walk_unitary(step_operator(g, EdgeConfig::empty(g), r), h).dense();
  CHECK(max_abs(u_empty - kron_identity(6, r.matrix() * h.matrix())) < 1e-15);
}

TEST_CASE("general graph K4 with a compatible reflection") {
  const auto g = percwalk::testing::k4();
  const auto r = percwalk::testing::k4_reflection();
  const auto coin = percwalk::testing::k4_coin();
  CHECK(r.trace() == 1);
  for (const auto& k : enumerate_configs(g)) {
    const Matrix s = step_operator(g, k, r).dense();
    CHECK(max_abs(s - reference_step(g, k, r)) == 0.0);
    CHECK(unitarity_defect(walk_unitary(step_operator(g, k, r), coin).dense()) < 1e-12);
  }
  // The identity relabeling does not invert this labeling's edge directions.
  CHECK_THROWS_WITH_AS(step_operator(g, EdgeConfig::from_mask(g, 1), ReflectionOperator::from_permutation({0, 1, 2})),
                       doctest::Contains("incompatible"), NumericalError);
  CHECK_THROWS_AS(ReflectionOperator::from_permutation({0, 0, 1}), ConfigError);
  CHECK_THROWS_AS(ReflectionOperator::default_for(3), ConfigError);
}

TEST_CASE("localized initial states") {
  const auto g = PercolationGraph::make_cycle(7);
  const auto mixed = localized_initial_state(g, 2, 0.3, 0.9, 0.0).matrix();
  Matrix expected = Matrix::Zero(14, 14);
  expected(4, 4) = expected(5, 5) = 0.5;
  CHECK(max_abs(mixed - expected) < 1e-15);

  const auto pure = localized_initial_state(g, 0, 0.0, 1.1, 1.0).matrix();
  CHECK(std::abs(pure(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(pure.trace() - 1.0) < 1e-15);
  CHECK(std::abs((pure * pure).trace() - 1.0) < 1e-14);

  const auto fig = localized_initial_state(g, 0, kPi / 2, -kPi / 2, 1.0).matrix();
  CHECK(std::abs(fig(0, 1) - Complex(0, 0.5)) < 1e-15);
  CHECK(std::abs(fig(1, 0) - Complex(0, -0.5)) < 1e-15);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const int x0 = static_cast<int>(rng() % 7);
    const auto rho = localized_initial_state(g, x0, percwalk::testing::uniform(rng, -4, 4),
                                             percwalk::testing::uniform(rng, -4, 4), percwalk::testing::uniform(rng, 0, 1));
    double mass = 0.0;
    for (int c = 0; c < 2; ++c) mass += rho.matrix()(g.index(x0, c), g.index(x0, c)).real();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(localized_initial_state(g, 0, 0.0, 0.0, 1.5), ConfigError);
  CHECK_THROWS_AS(localized_initial_state(g, 7, 0.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(localized_initial_state(percwalk::testing::k4(), 0, 0.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("density matrix validation") {
  Matrix m = Matrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(DensityMatrix{m});
  Matrix not_hermitian = m;
  not_hermitian(0, 1) = Complex(0.1, 0);
  CHECK_THROWS_AS(DensityMatrix{not_hermitian}, NumericalError);
  CHECK_THROWS_AS(DensityMatrix(Matrix(m * 2.0)), NumericalError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, NumericalError);
  CHECK_NOTHROW(DensityMatrix{negative, false});
}
