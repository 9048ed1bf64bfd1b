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


#include "percwalk/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace percwalk::io {

namespace {

double to_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("init: bad number for " + std::string(key) + ": '" + s + "'");
  return value;
}

double angle_field(const json& spec, const char* rad_key, const char* pi_key) {
  if (spec.contains(pi_key)) return PiFraction::parse(spec.at(pi_key).get<std::string>()).radians();
  if (spec.contains(rad_key)) return spec.at(rad_key).get<double>();
  throw ConfigError(std::string("coin family needs '") + rad_key + "' or '" + pi_key + "'");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

PercolationGraph graph_from_json(const json& spec) {
  try {
    const std::string kind = spec.at("kind").get<std::string>();
    const int n = spec.at("N").get<int>();
    if (kind == "cycle") return PercolationGraph::make_cycle(n);
    if (kind == "line") return PercolationGraph::make_line(n);
    if (kind == "general") {
      const auto table = spec.at("neighbors").get<std::vector<std::vector<int>>>();
      if (table.empty()) throw ConfigError("general graph needs a nonempty neighbor table");
      return PercolationGraph::from_adjacency(n, static_cast<int>(table.front().size()), table);
    }
    throw ConfigError("unknown graph kind '" + kind + "' (expected cycle, line or general)");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("graph spec: ") + e.what());
  }
}

CoinOperator coin_from_json(const json& spec) {
  try {
    if (spec.contains("family")) {
      const json& f = spec.at("family");
      return CoinOperator::family(angle_field(f, "alpha", "alpha_pi"), angle_field(f, "beta", "beta_pi"));
    }
    if (spec.contains("matrix")) {
      const auto entries = spec.at("matrix").get<std::vector<std::vector<double>>>();
      const auto d = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
      if (d * d != static_cast<Eigen::Index>(entries.size()) || d == 0) {
        throw ConfigError("coin matrix needs d^2 [re, im] entries");
      }
      Matrix m(d, d);
      for (Eigen::Index k = 0; k < d * d; ++k) {
        const auto& e = entries[static_cast<std::size_t>(k)];
        if (e.size() != 2) throw ConfigError("coin matrix entries are [re, im] pairs");
        m(k / d, k % d) = Complex(e[0], e[1]);
      }
      return CoinOperator::from_matrix(std::move(m));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("coin spec: ") + e.what());
  }
  throw ConfigError("coin spec needs a 'family' or 'matrix' key");
}

ReflectionOperator reflection_from_json(const json& spec) {
  try {
    return ReflectionOperator::from_permutation(spec.get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("reflection spec: ") + e.what());
  }
}

InitSpec init_from_json(const json& spec) {
  InitSpec out;
  try {
    if (spec.contains("x0")) out.x0 = spec.at("x0").get<int>();
    if (spec.contains("theta")) out.theta = spec.at("theta").get<double>();
    if (spec.contains("phi")) out.phi = spec.at("phi").get<double>();
    if (spec.contains("P")) out.purity_weight = spec.at("P").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("init spec: ") + e.what());
  }
  return out;
}

InitSpec parse_init(std::string_view text) {
  InitSpec out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("init: expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "x0") {
      int x0 = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x0);
      if (ec != std::errc() || ptr != value.data() + value.size()) throw ConfigError("init: bad x0 '" + std::string(value) + "'");
      out.x0 = x0;
    } else if (key == "theta-pi") {
      out.theta = PiFraction::parse(value).radians();
    } else if (key == "phi-pi") {
      out.phi = PiFraction::parse(value).radians();
    } else if (key == "theta") {
      out.theta = to_double(key, value);
    } else if (key == "phi") {
      out.phi = to_double(key, value);
    } else if (key == "P") {
      out.purity_weight = to_double(key, value);
    } else {
      throw ConfigError("init: unknown key '" + std::string(key) + "' (x0, theta-pi, phi-pi, theta, phi, P)");
    }
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TrajectoryCsvWriter::TrajectoryCsvWriter(std::ostream& out, int vertex_count, int degree)
    : out_(out), n_(vertex_count), d_(degree) {
  out_ << "step,manhattan_joint_uniform,manhattan_pos_uniform,purity,fidelity_mixed";
  for (int a = 0; a < n_; ++a) out_ << ",pos_prob_" << a;
  out_ << '\n';
}

void TrajectoryCsvWriter::write(int step, const Matrix& rho) {
  const auto joint = joint_distribution(rho);
  const auto pos = position_marginal(rho, d_);
  out_ << step << ',' << format_double(manhattan(joint, ProbabilityDistribution::uniform(joint.size()))) << ','
       << format_double(manhattan(pos, ProbabilityDistribution::uniform(pos.size()))) << ','
       << format_double(purity(rho)) << ',' << format_double(fidelity_mixed(rho));
  for (double w : pos.weights) out_ << ',' << format_double(w);
  out_ << '\n';
}

json attractors_to_json(const AttractorBasis& basis) {
  json items = json::array();
  for (const auto& item : basis.items) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < item.matrix.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < item.matrix.cols(); ++c) {
        row.push_back({{"re", item.matrix(r, c).real()}, {"im", item.matrix(r, c).imag()}});
      }
      rows.push_back(std::move(row));
    }
    items.push_back({{"eigenvalue", {{"re", item.eigenvalue.real()}, {"im", item.eigenvalue.imag()}}}, {"matrix", std::move(rows)}});
  }
  return {{"dimension", basis.dimension()}, {"case", basis.case_tag}, {"items", std::move(items)}};
}

void write_mixing_csv(std::ostream& out, const MixingReport& report) {
  out << "epsilon,t_measured,t_estimated,abs_lambda_prime,abs_overlap\n";
  for (std::size_t i = 0; i < report.epsilon_grid.size(); ++i) {
    out << format_double(report.epsilon_grid[i]) << ',';
    if (i < report.t_measured.size()) out << report.t_measured[i];
    out << ',' << format_double(report.t_estimated[i]) << ',' << format_double(std::abs(report.lambda_prime)) << ','
        << format_double(std::abs(report.overlap)) << '\n';
  }
}

}  // namespace percwalk::io
