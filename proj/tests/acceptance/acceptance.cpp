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


// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "percwalk/analysis.hpp"
#include "percwalk/attractor.hpp"
#include "percwalk/channel.hpp"
#include "percwalk/linalg.hpp"
#include "test_support.hpp"

using namespace percwalk;
using percwalk::testing::max_abs;

namespace {

using Clock = std::chrono::steady_clock;

const ReflectionOperator kSigmaX = ReflectionOperator::sigma_x();

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(const char* pattern, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

AttractorBasis spectral(const PercolationGraph& g, const CoinOperator& c, double p = 0.5) {
  return solve_attractors_spectral(build_superoperator(g, c, kSigmaX, p));
}

Outcome channel_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (const auto& g : {PercolationGraph::make_line(n), PercolationGraph::make_cycle(n)}) {
      for (int draw = 0; draw < 20; ++draw) {
        const double p = percwalk::testing::uniform(rng, 0.0, 1.0);
        const auto coin = CoinOperator::family(percwalk::testing::uniform(rng, 0, 2 * kPi), percwalk::testing::generic_beta(rng));
        const Matrix rho = percwalk::testing::random_state(g.dimension(), rng);
        worst = std::max(worst, max_abs(apply_channel_local(g, coin, kSigmaX, p, rho) -
                                        apply_channel_bruteforce(g, coin, kSigmaX, p, rho)));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-12 && elapsed < 10.0, "max |local - brute| = " + num("%.2e", worst) + ", " + num("%.2f", elapsed) + " s"};
}

Outcome cptp_steps() {
  std::mt19937_64 rng(1002);
  double trace_err = 0.0, herm_err = 0.0, min_eig = 1.0;
  for (int step = 0; step < 100; ++step) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto g = step % 2 ? PercolationGraph::make_cycle(n) : PercolationGraph::make_line(n);
    const auto coin = CoinOperator::family(percwalk::testing::uniform(rng, 0, 2 * kPi), percwalk::testing::generic_beta(rng));
    const Matrix rho = step % 3 ? percwalk::testing::random_state(g.dimension(), rng)
                                : percwalk::testing::random_pure_state(g.dimension(), rng);
    const Matrix out = apply_channel_local(g, coin, kSigmaX, percwalk::testing::uniform(rng, 0, 1), rho);
    trace_err = std::max(trace_err, std::abs(out.trace() - 1.0));
    herm_err = std::max(herm_err, max_abs(out - out.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(out, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return {trace_err < 1e-12 && herm_err < 1e-12 && min_eig >= -1e-10,
          "trace err " + num("%.1e", trace_err) + ", hermiticity err " + num("%.1e", herm_err) + ", min eig " +
              num("%.1e", min_eig)};
}

Outcome p_independence() {
  const auto start = Clock::now();
  const auto h = CoinOperator::hadamard();
  double worst = 0.0;
  for (const auto& g : {PercolationGraph::make_line(5), PercolationGraph::make_cycle(6)}) {
    worst = std::max(worst, max_subspace_angle(spectral(g, h, 0.3), spectral(g, h, 0.7)));
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-8 && elapsed < 30.0, "max angle " + num("%.2e", worst) + ", " + num("%.2f", elapsed) + " s"};
}

Outcome dimension_table() {
  struct Row {
    const char* label;
    PercolationGraph g;
    CoinOperator c;
    std::size_t expected;
  };
  std::vector<Row> rows;
  const auto generic = CoinOperator::family(kPi / 3, kPi / 5);
  for (int n = 2; n <= 8; ++n) rows.push_back({"line", PercolationGraph::make_line(n), generic, 5});
  rows.push_back({"cycle(7, H)", PercolationGraph::make_cycle(7), CoinOperator::hadamard(), 1});
  rows.push_back({"cycle(8, H)", PercolationGraph::make_cycle(8), CoinOperator::hadamard(), 5});
  rows.push_back({"cycle(5, 2pi/5)", PercolationGraph::make_cycle(5), CoinOperator::family(2 * kPi / 5, kPi / 4), 2});
  rows.push_back({"cycle(2, pi/3)", PercolationGraph::make_cycle(2), CoinOperator::family(kPi / 3, kPi / 4), 2});
  rows.push_back({"cycle(6, pi/5)", PercolationGraph::make_cycle(6), CoinOperator::family(kPi / 5, kPi / 4), 1});
  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    const std::size_t dim = spectral(row.g, row.c).dimension();
    if (dim != row.expected) {
      pass = false;
      detail += std::string(row.label) + " N=" + std::to_string(row.g.vertex_count()) + " got " + std::to_string(dim) + "; ";
    }
  }
  return {pass, pass ? std::to_string(rows.size()) + " rows match" : detail};
}

Outcome line_eigenvalues() {
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  bool sets_match = true;
  for (int draw = 0; draw < 10; ++draw) {
    const int n = 3 + draw % 4;
    const double beta = percwalk::testing::generic_beta(rng);
    const auto basis = spectral(PercolationGraph::make_line(n), CoinOperator::family(percwalk::testing::uniform(rng, 0, 6), beta));
    const std::vector<Complex> expected{1.0, std::polar(1.0, 2 * beta), std::polar(1.0, -2 * beta)};
    const auto found = basis.eigenvalues();
    if (found.size() != expected.size()) sets_match = false;
    for (Complex z : found) {
      double best = 1e9;
      for (Complex e : expected) best = std::min(best, std::abs(z - e));
      worst = std::max(worst, best);
    }
    for (Complex e : expected) {
      double best = 1e9;
      for (Complex z : found) best = std::min(best, std::abs(z - e));
      worst = std::max(worst, best);
    }
  }
  return {sets_match && worst < 1e-10, "max eigenvalue error " + num("%.2e", worst)};
}

Outcome three_way_agreement() {
  double worst = 0.0;
  int cases = 0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<PiFraction> alphas{PiFraction::make(1, 3), PiFraction::make(2, 5), PiFraction::make(2, n),
                                   PiFraction::make(1, n)};
    if (n != 2) alphas.push_back(PiFraction::make(1, 2));
    for (const auto& alpha : alphas) {
      for (const auto& beta : {PiFraction::make(1, 4), PiFraction::make(1, 5)}) {
        for (GraphKind kind : {GraphKind::line, GraphKind::cycle}) {
          if (kind == GraphKind::cycle && n == 2 && alpha.den <= 2) continue;
          const auto g = kind == GraphKind::line ? PercolationGraph::make_line(n) : PercolationGraph::make_cycle(n);
          const auto coin = CoinOperator::family(alpha.radians(), beta.radians());
          const auto a = spectral(g, coin);
          const auto b = solve_attractors_twostep(g, coin, kSigmaX);
          const auto c = catalog_1d(kind, n, alpha, beta.radians());
          worst = std::max({worst, max_subspace_angle(a, b), max_subspace_angle(a, c), max_subspace_angle(b, c)});
          ++cases;
        }
      }
    }
  }
  return {worst < 1e-8, std::to_string(cases) + " cases, max angle " + num("%.2e", worst)};
}

Outcome asymptotic_purity() {
  double worst = 0.0, mixed_p0 = 0.0, min_dist_p = 1.0;
  for (int n = 3; n <= 8; ++n) {
    const auto g = PercolationGraph::make_line(n);
    const auto basis = spectral(g, CoinOperator::hadamard());
    for (double pw : {0.0, 0.5, 1.0}) {
      const Matrix rho0 = localized_initial_state(g, 0, kPi / 2, -kPi / 2, pw).matrix();
      double averaged = 0.0;
      Matrix mean = Matrix::Zero(2 * n, 2 * n);
      for (long long t = 0; t < 4; ++t) {
        const Matrix state = asymptotic_state(basis, rho0, t);
        averaged += purity(state) / 4.0;
        mean += state / 4.0;
      }
      worst = std::max(worst, std::abs(averaged - asymptotic_purity_localized(n, pw)));
      const Matrix mixed = Matrix::Identity(2 * n, 2 * n) / (2.0 * n);
      const double dist = 0.5 * linalg::trace_norm(mean - mixed);
      if (pw == 0.0) {
        for (long long t = 0; t < 4; ++t) {
          mixed_p0 = std::max(mixed_p0, 0.5 * linalg::trace_norm(asymptotic_state(basis, rho0, t) - mixed));
        }
      } else {
        min_dist_p = std::min(min_dist_p, dist);
      }
    }
  }
  return {worst < 1e-10 && mixed_p0 < 1e-10 && min_dist_p > 1e-6,
          "max purity error " + num("%.2e", worst) + ", P=0 distance " + num("%.1e", mixed_p0) + ", P>0 min distance " +
              num("%.3e", min_dist_p)};
}

struct FigureSetup {
  const char* label;
  PercolationGraph g;
  CoinOperator coin;
  DensityMatrix rho0;
};

std::vector<FigureSetup> figure1_setups() {
  const auto c7 = PercolationGraph::make_cycle(7);
  const auto c8 = PercolationGraph::make_cycle(8);
  const auto l7 = PercolationGraph::make_line(7);
  const auto h = CoinOperator::hadamard();
  return {{"a", c7, h, localized_initial_state(c7, 0, kPi / 2, -kPi / 2, 1.0)},
          {"b", c8, h, localized_initial_state(c8, 0, kPi / 2, -kPi / 2, 1.0)},
          {"c", l7, h, localized_initial_state(l7, 0, -kPi / 2, -kPi, 1.0)},
          {"d", c8, CoinOperator::family(kPi / 2, std::sqrt(2.0)), localized_initial_state(c8, 0, -kPi / 2, -kPi, 1.0)}};
}

Outcome iteration_vs_projection() {
  std::string detail;
  bool pass = true;
  for (const auto& s : figure1_setups()) {
    if (std::string(s.label) == "d") continue;
    const auto basis = spectral(s.g, s.coin);
    Matrix rho = s.rho0.matrix();
    const LocalChannel channel(s.g, s.coin, kSigmaX, 0.5);
    for (int t = 0; t < 500; ++t) rho = channel.apply(rho);
    const double dist = linalg::trace_norm(rho - asymptotic_state(basis, s.rho0.matrix(), 500));
    pass = pass && dist < 1e-6;
    detail += std::string(s.label) + ": " + num("%.2e", dist) + "  ";
  }
  return {pass, detail};
}

Outcome figure1() {
  const auto setups = figure1_setups();
  std::string detail;
  bool pass = true;
  const auto exact_phases = family_phase_candidates(PiFraction::make(1, 4));
  for (const auto& s : setups) {
    const auto start = Clock::now();
    const std::string label = s.label;
    const int dim = s.g.dimension();
    const Matrix mixed = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    const auto traj = evolve(s.g, s.coin, kSigmaX, 0.5, s.rho0, 300, EvolveMethod::local);
    const Matrix& last = traj.states.back().matrix();
    const auto basis = spectral(s.g, s.coin);
    bool ok = false;
    if (label == "a") {
      const double m = manhattan(joint_distribution(last), ProbabilityDistribution::uniform(static_cast<std::size_t>(dim)));
      const double f = fidelity_mixed(last);
      ok = m < 1e-3 && f > 0.999;
      detail += "a: M=" + num("%.1e", m) + " F=" + num("%.6f", f);
    } else if (label == "b") {
      const auto a = classify_asymptotics(basis, s.rho0.matrix(), exact_phases);
      const double step_change = linalg::trace_norm(last - traj.states[traj.states.size() - 2].matrix());
      const double dist = 0.5 * linalg::trace_norm(last - mixed);
      ok = a.kind == AsymptoticKind::stationary && step_change < 1e-8 && dist > 1e-3;
      detail += "; b: " + to_string(a) + " distance " + num("%.4f", dist);
    } else if (label == "c") {
      const auto a = classify_asymptotics(basis, s.rho0.matrix(), exact_phases);
      ok = a.kind == AsymptoticKind::periodic && a.period == 4;
      detail += "; c: " + to_string(a);
    } else {
      const auto a = classify_asymptotics(basis, s.rho0.matrix(), family_phase_candidates(PiFraction::make(1, 4)));
      ok = a.kind == AsymptoticKind::quasi_periodic;
      detail += "; d: " + to_string(a);
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed <= 60.0;
    pass = pass && ok;
  }
  return {pass, detail};
}

Outcome figure2() {
  const auto g = PercolationGraph::make_cycle(7);
  const auto h = CoinOperator::hadamard();
  const auto rho0 = localized_initial_state(g, 0, 0.0, 0.0, 0.0);
  const auto grid = logspace(1e-3, 1e-1, 20);
  const auto basis = spectral(g, h);
  const auto reference = asymptotic_reference(basis, rho0.matrix(), 2);
  MixingReport report = mixing_time_estimate(build_superoperator(g, h, kSigmaX, 0.5), rho0.matrix(), grid);
  const auto traj = evolve(g, h, kSigmaX, 0.5, rho0, 1000, EvolveMethod::local);
  const auto distances = position_distances(traj, 2, reference);
  bool monotone = true;
  double worst = 0.0;
  std::printf("  %-12s %10s %12s\n", "epsilon", "t_measured", "t_estimated");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int t = mixing_time_measured(distances, grid[i]);
    report.t_measured.push_back(t);
    if (i > 0 && t > report.t_measured[i - 1]) monotone = false;
    worst = std::max(worst, std::abs(t - report.t_estimated[i]));
    std::printf("  %-12.6g %10d %12.3f\n", grid[i], t, report.t_estimated[i]);
  }
  return {monotone && worst <= 3.0, std::string("monotone ") + (monotone ? "yes" : "no") + ", max |measured - estimate| = " +
                                        num("%.2f", worst) + " steps (|lambda'| = " +
                                        num("%.6f", std::abs(report.lambda_prime)) + ", |O| = " +
                                        num("%.3e", std::abs(report.overlap)) + ")"};
}

Outcome monte_carlo() {
  const auto g = PercolationGraph::make_cycle(7);
  const auto h = CoinOperator::hadamard();
  const auto rho0 = localized_initial_state(g, 0, kPi / 2, -kPi / 2, 1.0);
  const auto exact = evolve(g, h, kSigmaX, 0.5, rho0, 50, EvolveMethod::local);
  const auto a = monte_carlo_evolve(g, h, kSigmaX, 0.5, rho0, 50, 10000, 20240607);
  const auto b = monte_carlo_evolve(g, h, kSigmaX, 0.5, rho0, 50, 10000, 20240607);
  const double m = manhattan(joint_distribution(a.states.back().matrix()), joint_distribution(exact.states.back().matrix()));
  bool identical = true;
  for (std::size_t t = 0; t < a.states.size(); ++t) {
    identical = identical && (a.states[t].matrix().array() == b.states[t].matrix().array()).all();
  }
  return {m < 0.02 && identical,
          "Manhattan(MC, exact) = " + num("%.4f", m) + ", reruns bit-identical: " + (identical ? "yes" : "no")};
}

Outcome performance() {
  std::vector<double> log_n, log_t;
  std::string detail;
  std::mt19937_64 rng(1012);
  for (int n : {8, 16, 32, 64}) {
    const auto g = PercolationGraph::make_cycle(n);
    const LocalChannel channel(g, CoinOperator::hadamard(), kSigmaX, 0.5);
    Matrix rho = percwalk::testing::random_state(g.dimension(), rng);
    rho = channel.apply(rho);
    int reps = 0;
    const auto start = Clock::now();
    do {
      rho = channel.apply(rho);
      ++reps;
    } while (seconds_since(start) < 0.3);
    const double per_step = seconds_since(start) / reps;
    log_n.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(per_step));
    detail += "N=" + std::to_string(n) + ": " + num("%.2e", per_step) + " s; ";
  }
  const double mean_x = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
  const double mean_y = std::accumulate(log_t.begin(), log_t.end(), 0.0) / log_t.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxy += (log_n[i] - mean_x) * (log_t[i] - mean_y);
    sxx += (log_n[i] - mean_x) * (log_n[i] - mean_x);
  }
  const double exponent = sxy / sxx;
  bool refused = false;
  try {
    const auto g = PercolationGraph::make_cycle(20);
    apply_channel_bruteforce(g, CoinOperator::hadamard(), kSigmaX, 0.5, Matrix::Identity(40, 40) / 40.0);
  } catch (const NumericalError&) {
    refused = true;
  }
  return {exponent < 2.3 && refused, detail + "exponent " + num("%.3f", exponent) + ", brute force N=20 refused: " +
                                         (refused ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"channel equivalence (local vs brute force)", channel_equivalence},
      {"CPTP property suite", cptp_steps},
      {"p-independence of attractors", p_independence},
      {"attractor dimension table", dimension_table},
      {"line attractor eigenvalues", line_eigenvalues},
      {"three-way solver agreement", three_way_agreement},
      {"asymptotic purity", asymptotic_purity},
      {"asymptotic projection vs iteration", iteration_vs_projection},
      {"figure 1 character", figure1},
      {"figure 2 mixing times", figure2},
      {"Monte Carlo consistency", monte_carlo},
      {"performance scaling", performance},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    const auto start = Clock::now();
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("criterion %2zu: %s  %s  [%s] (%.2f s)\n", i + 1, outcome.pass ? "PASS" : "FAIL", criteria[i].first,
                outcome.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
