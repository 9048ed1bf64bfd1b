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


#include "percwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "percwalk/analysis.hpp"
#include "percwalk/attractor.hpp"
#include "percwalk/channel.hpp"
#include "percwalk/io.hpp"
#include "percwalk/linalg.hpp"

namespace percwalk {

namespace {

struct Options {
  std::string graph = "cycle";
  int n = 7;
  std::string coin = "family";
  std::string alpha_pi;
  std::string beta_pi;
  std::optional<double> alpha_rad;
  std::optional<double> beta_rad;
  std::string reflection;
  double p = 0.5;
  std::string init = "x0=0,theta-pi=1/2,phi-pi=-1/2,P=1";
  int steps = 300;
  std::string method = "local";
  int trajectories = 0;
  std::uint64_t seed = 1;
  std::string out;
  int workers = 1;
  std::string config;
  bool check = false;
  bool use_case_table = false;
  std::string solver = "auto";
  std::string eps_grid = "1e-3:1e-1:20";
  std::string epsilon;
  std::string reference = "asymptotic";
};

struct Setup {
  PercolationGraph graph = PercolationGraph::make_cycle(2);
  CoinOperator coin = CoinOperator::hadamard();
  ReflectionOperator reflection = ReflectionOperator::sigma_x();
  bool family = false;
  std::optional<AlphaSpec> alpha;
  std::optional<PiFraction> beta_exact;
  double beta = 0.0;
};

std::string fmt(const char* pattern, double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string format_complex(Complex z) {
  const std::string im = fmt("%.10f", std::abs(z.imag()));
  return fmt("%.10f", z.real()) + (z.imag() < 0 && im != "0.0000000000" ? " - " : " + ") + im + "i";
}

std::string format_eigenvalue(Complex z) {
  double phase = std::arg(z) / kPi;
  if (phase < -1e-12) phase += 2.0;
  if (phase > 2.0 - 1e-12) phase = 0.0;
  return format_complex(z) + "  (phase/pi = " + fmt("%.10f", phase) + ")";
}

double angle(const std::string& pi_text, const std::optional<double>& rad, double fallback_pi, const char* name,
             std::optional<PiFraction>& exact) {
  if (!pi_text.empty() && rad) throw ConfigError(std::string("give either --") + name + "-pi or --" + name + "-rad, not both");
  if (rad) return *rad;
  exact = pi_text.empty() ? PiFraction::make(static_cast<std::int64_t>(fallback_pi * 4), 4) : PiFraction::parse(pi_text);
  return exact->radians();
}

Setup build_setup(const Options& o) {
  Setup s;
  if (o.graph == "cycle") {
    s.graph = PercolationGraph::make_cycle(o.n);
  } else if (o.graph == "line") {
    s.graph = PercolationGraph::make_line(o.n);
  } else if (o.graph.rfind("general:", 0) == 0) {
    s.graph = io::graph_from_json(io::load_json_file(o.graph.substr(8)));
  } else {
    throw ConfigError("--graph must be cycle, line or general:<file>; got '" + o.graph + "'");
  }

  if (o.coin == "family" || o.coin == "hadamard") {
    std::optional<PiFraction> alpha_exact;
    const double alpha = angle(o.alpha_pi, o.alpha_rad, 0.5, "alpha", alpha_exact);
    const double beta = angle(o.beta_pi, o.beta_rad, 0.25, "beta", s.beta_exact);
    s.coin = CoinOperator::family(alpha, beta);
    s.family = true;
    s.beta = beta;
    if (alpha_exact) {
      s.alpha = *alpha_exact;
    } else {
      s.alpha = alpha;
    }
  } else if (o.coin.rfind("matrix:", 0) == 0) {
    io::json spec = io::load_json_file(o.coin.substr(7));
    if (spec.is_array()) spec = io::json{{"matrix", spec}};
    s.coin = io::coin_from_json(spec);
  } else {
    throw ConfigError("--coin must be family or matrix:<file>; got '" + o.coin + "'");
  }

  if (!o.reflection.empty()) {
    std::vector<int> perm;
    std::stringstream in(o.reflection);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        perm.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ConfigError("--reflection expects a comma-separated permutation, got '" + o.reflection + "'");
      }
    }
    s.reflection = ReflectionOperator::from_permutation(perm);
  } else {
    s.reflection = ReflectionOperator::default_for(s.graph.degree());
  }
  if (s.coin.dimension() != s.graph.degree()) {
    throw ConfigError("coin dimension " + std::to_string(s.coin.dimension()) + " does not match graph degree " +
                      std::to_string(s.graph.degree()));
  }
  return s;
}

DensityMatrix initial_state(const Options& o, const Setup& s) {
  const io::InitSpec init = io::parse_init(o.init);
  return localized_initial_state(s.graph, init.x0, init.theta, init.phi, init.purity_weight);
}

bool one_dimensional(const Setup& s) {
  return s.family && (s.graph.kind() == GraphKind::cycle || s.graph.kind() == GraphKind::line);
}

AttractorBasis catalog_basis(const Setup& s) {
  if (!one_dimensional(s)) throw ConfigError("--use-case-table needs a line or cycle with the family coin");
  if (s.reflection.permutation() != std::vector<int>{1, 0}) throw ConfigError("--use-case-table needs R = sigma_x");
  if (s.graph.kind() == GraphKind::cycle && !std::holds_alternative<AlphaRational>(*s.alpha)) {
    throw ConfigError("--use-case-table on a cycle needs --alpha-pi l/m (rationality of a float alpha is undecidable)");
  }
  return catalog_1d(s.graph.kind(), s.graph.vertex_count(), *s.alpha, s.beta);
}

void check_attractor_p(double p) {
  if (!(p > 1e-6 && p < 1.0 - 1e-6)) {
    throw ConfigError("attractor analysis needs 0 < p < 1 (got " + io::format_double(p) + "); use 'run' for p = 0 or 1");
  }
}

AttractorBasis solve(const Options& o, const Setup& s) {
  check_attractor_p(o.p);
  std::string solver = o.use_case_table ? "catalog" : o.solver;
  if (solver == "auto") solver = "spectral";
  AttractorBasis basis;
  if (solver == "catalog") {
    basis = catalog_basis(s);
  } else if (solver == "spectral") {
    basis = solve_attractors_spectral(build_superoperator(s.graph, s.coin, s.reflection, o.p));
  } else if (solver == "twostep") {
    basis = solve_attractors_twostep(s.graph, s.coin, s.reflection);
  } else {
    throw ConfigError("--solver must be auto, spectral, twostep or catalog; got '" + solver + "'");
  }
  if (basis.case_tag == "numeric" && one_dimensional(s) && s.reflection.permutation() == std::vector<int>{1, 0}) {
    try {
      basis.case_tag = catalog_case(s.graph.kind(), s.graph.vertex_count(), *s.alpha);
    } catch (const Error&) {
    }
  }
  return basis;
}

std::vector<PiFraction> exact_phases(const Setup& s) {
  if (s.family && s.beta_exact) return family_phase_candidates(*s.beta_exact);
  return {};
}

std::vector<double> epsilon_grid(const Options& o) {
  std::vector<double> out;
  if (!o.epsilon.empty()) {
    std::stringstream in(o.epsilon);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("--epsilon expects comma-separated numbers, got '" + o.epsilon + "'");
      }
    }
  } else {
    double lo = 0, hi = 0;
    int n = 0;
    if (std::sscanf(o.eps_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3) {
      throw ConfigError("--eps-grid expects lo:hi:count, got '" + o.eps_grid + "'");
    }
    out = logspace(lo, hi, n);
  }
  for (double e : out) {
    if (!(e > 0)) throw ConfigError("epsilon values must be positive");
  }
  return out;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int cmd_run(const Options& o, std::ostream& out) {
  const Setup s = build_setup(o);
  const DensityMatrix rho0 = initial_state(o, s);
  if (o.steps < 0) throw ConfigError("--steps must be nonnegative");
  Output sink(o.out, out);
  io::TrajectoryCsvWriter writer(sink.stream(), s.graph.vertex_count(), s.graph.degree());
  if (o.trajectories > 0) {
    const Trajectory t = monte_carlo_evolve(s.graph, s.coin, s.reflection, o.p, rho0, o.steps, o.trajectories, o.seed, o.workers);
    for (int step = 0; step <= t.step_count(); ++step) writer.write(step, t.states[static_cast<std::size_t>(step)].matrix());
  } else {
    EvolveOptions options;
    options.workers = o.workers;
    evolve_visit(s.graph, s.coin, s.reflection, o.p, rho0, o.steps, parse_evolve_method(o.method), options,
                 [&](int step, const Matrix& rho) { writer.write(step, rho); });
  }
  if (sink.to_file()) out << "wrote " << (o.steps + 1) << " rows to " << o.out << '\n';
  return 0;
}

int cmd_attractors(const Options& o, std::ostream& out) {
  const Setup s = build_setup(o);
  const AttractorBasis basis = solve(o, s);
  out << "dimension " << basis.dimension() << ", case " << basis.case_tag << '\n';
  for (Complex lambda : basis.eigenvalues()) {
    const auto mult = basis.subspace(lambda).cols();
    out << "  lambda = " << format_eigenvalue(lambda) << "  multiplicity " << mult << '\n';
  }
  if (o.check) {
    const Superoperator phi = build_superoperator(s.graph, s.coin, s.reflection, o.p);
    const AttractorBasis spectral = solve_attractors_spectral(phi);
    const AttractorBasis twostep = solve_attractors_twostep(s.graph, s.coin, s.reflection);
    double worst = max_subspace_angle(spectral, twostep);
    out << "check spectral vs twostep: max angle " << fmt("%.3e", worst) << '\n';
    bool catalog_ok = false;
    AttractorBasis catalog;
    try {
      catalog = catalog_basis(s);
      catalog_ok = true;
    } catch (const Error& e) {
      out << "check catalog: skipped (" << e.what() << ")\n";
    }
    if (catalog_ok) {
      const double angle = max_subspace_angle(spectral, catalog);
      out << "check spectral vs catalog: max angle " << fmt("%.3e", angle) << '\n';
      worst = std::max(worst, angle);
    }
    const double residual = eigen_residual(basis, LocalChannel(s.graph, s.coin, s.reflection, o.p));
    out << "check eigen residual: " << fmt("%.3e", residual) << '\n';
    if (worst > 1e-8 || residual > 1e-10) throw NumericalError("attractor solvers disagree");
    out << "check passed\n";
  }
  if (!o.out.empty()) {
    Output sink(o.out, out);
    sink.stream() << io::attractors_to_json(basis).dump(2) << '\n';
    out << "wrote " << o.out << '\n';
  }
  return 0;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Setup s = build_setup(o);
  const DensityMatrix rho0 = initial_state(o, s);
  const AttractorBasis basis = solve(o, s);
  const auto phases = exact_phases(s);
  const Asymptotics a = classify_asymptotics(basis, rho0.matrix(), phases);
  out << "verdict: " << to_string(a) << '\n';
  out << "active eigenvalues:\n";
  for (Complex lambda : a.active) out << "  " << format_eigenvalue(lambda) << '\n';
  const bool mixed = a.distance_to_mixed < 1e-10;
  out << "maximally mixed limit: " << (mixed ? "yes" : "no") << " (trace distance " << fmt("%.6e", a.distance_to_mixed)
      << ")\n";
  return 0;
}

int cmd_mixing(const Options& o, std::ostream& out, bool steps_given) {
  const Setup s = build_setup(o);
  const DensityMatrix rho0 = initial_state(o, s);
  const std::vector<double> grid = epsilon_grid(o);
  const AttractorBasis basis = solve(o, s);
  const Asymptotics a = classify_asymptotics(basis, rho0.matrix(), exact_phases(s));
  if (a.kind == AsymptoticKind::quasi_periodic) {
    throw ConvergenceError("mixing time undefined: the asymptotic dynamics is quasi-periodic");
  }
  ProbabilityDistribution reference;
  if (o.reference == "asymptotic") {
    reference = asymptotic_reference(basis, rho0.matrix(), s.graph.degree());
  } else if (o.reference == "uniform") {
    reference = ProbabilityDistribution::uniform(static_cast<std::size_t>(s.graph.vertex_count()));
  } else {
    throw ConfigError("--reference must be asymptotic or uniform");
  }
  MixingReport report = mixing_time_estimate(build_superoperator(s.graph, s.coin, s.reflection, o.p), rho0.matrix(), grid);

  const int steps = steps_given ? o.steps : 1000;
  std::vector<double> distances;
  EvolveOptions options;
  options.workers = o.workers;
  evolve_visit(s.graph, s.coin, s.reflection, o.p, rho0, steps, EvolveMethod::local, options, [&](int, const Matrix& rho) {
    distances.push_back(manhattan(position_marginal(rho, s.graph.degree()), reference));
  });
  for (double eps : grid) report.t_measured.push_back(mixing_time_measured(distances, eps));

  Output sink(o.out, out);
  io::write_mixing_csv(sink.stream(), report);
  if (sink.to_file()) {
    out << "lambda' = " << format_eigenvalue(report.lambda_prime) << ", |lambda'| = " << fmt("%.10f", std::abs(report.lambda_prime))
        << '\n';
    out << "overlap |O| = " << fmt("%.6e", std::abs(report.overlap)) << ", left coefficient |c| = "
        << fmt("%.6e", std::abs(report.left_coefficient)) << ", eigenbasis condition number "
        << fmt("%.3e", report.condition_number) << '\n';
    out << "wrote " << grid.size() << " rows to " << o.out << '\n';
  }
  return 0;
}

void add_shared(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON file of flag values; explicit flags override it");
  cmd->add_option("--graph", o.graph, "cycle | line | general:<file>");
  cmd->add_option("--N", o.n, "vertex count for cycle and line");
  cmd->add_option("--coin", o.coin, "family | matrix:<file>");
  cmd->add_option("--alpha-pi", o.alpha_pi, "alpha as l/m (multiples of pi)");
  cmd->add_option("--beta-pi", o.beta_pi, "beta as l/m (multiples of pi)");
  cmd->add_option("--alpha-rad", o.alpha_rad, "alpha in radians");
  cmd->add_option("--beta-rad", o.beta_rad, "beta in radians");
  cmd->add_option("--reflection", o.reflection, "reflection permutation, e.g. 1,0");
  cmd->add_option("--p", o.p, "edge presence probability");
  cmd->add_option("--init", o.init, "x0=..,theta-pi=..,phi-pi=..,P=..");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
}

std::vector<std::string> config_arguments(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  std::vector<std::string> out;
  if (path.empty()) return out;
  const io::json spec = io::load_json_file(path);
  if (!spec.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : spec.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      out.push_back(flag);
      out.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(io::format_double(value.get<double>()));
    } else {
      throw ConfigError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Coined quantum walks on dynamically percolated graphs", "percwalk"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "evolve a state and write the trajectory CSV");
  add_shared(run, o);
  run->add_option("--steps", o.steps, "number of steps");
  run->add_option("--method", o.method, "local | bruteforce | matrix");
  run->add_option("--trajectories", o.trajectories, "Monte Carlo trajectories (0: exact channel)");
  run->add_option("--seed", o.seed, "Monte Carlo seed");

  auto* attractors = app.add_subcommand("attractors", "compute the attractor space");
  add_shared(attractors, o);
  attractors->add_option("--solver", o.solver, "auto | spectral | twostep | catalog");
  attractors->add_flag("--check", o.check, "cross-validate spectral, two-step and catalog solvers");
  attractors->add_flag("--use-case-table", o.use_case_table, "use the closed-form 1D catalog");

  auto* mixing = app.add_subcommand("mixing", "measured and estimated position mixing times");
  add_shared(mixing, o);
  auto* mixing_steps = mixing->add_option("--steps", o.steps, "evolution horizon (default 1000)");
  mixing->add_option("--eps-grid", o.eps_grid, "lo:hi:count, log-spaced");
  mixing->add_option("--epsilon", o.epsilon, "explicit comma-separated thresholds");
  mixing->add_option("--reference", o.reference, "asymptotic | uniform");
  mixing->add_option("--solver", o.solver, "auto | spectral | twostep | catalog");
  mixing->add_flag("--use-case-table", o.use_case_table, "use the closed-form 1D catalog");

  auto* classify = app.add_subcommand("classify", "stationary, periodic or quasi-periodic verdict");
  add_shared(classify, o);
  classify->add_option("--solver", o.solver, "auto | spectral | twostep | catalog");
  classify->add_flag("--use-case-table", o.use_case_table, "use the closed-form 1D catalog");

  try {
    std::vector<std::string> full = args;
    if (!full.empty()) {
      const auto extra = config_arguments(args);
      full.insert(full.begin() + 1, extra.begin(), extra.end());
    }
    std::reverse(full.begin(), full.end());
    try {
      app.parse(full);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 2;
    }
    if (run->parsed()) return cmd_run(o, out);
    if (attractors->parsed()) return cmd_attractors(o, out);
    if (mixing->parsed()) return cmd_mixing(o, out, mixing_steps->count() > 0);
    if (classify->parsed()) return cmd_classify(o, out);
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace percwalk
