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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "percwalk/analysis.hpp"
#include "percwalk/attractor.hpp"
#include "percwalk/graph.hpp"
#include "percwalk/walk.hpp"

namespace percwalk::io {

using nlohmann::json;

/// Reads a JSON file; ConfigError when missing or malformed.
json load_json_file(const std::string& path);

/// {"kind": "cycle"|"line"|"general", "N": int, "neighbors": [[...], ...]}.
PercolationGraph graph_from_json(const json& spec);

/// {"family": {"alpha": f, "beta": f}} (radians; "alpha_pi"/"beta_pi" as
/// "l/m" strings also accepted) or {"matrix": [[re, im], ...]} with d²
/// entries in row-major order.
CoinOperator coin_from_json(const json& spec);

/// [perm_0, ..., perm_{d-1}].
ReflectionOperator reflection_from_json(const json& spec);

struct InitSpec {
  int x0 = 0;
  double theta = kPi / 2;
  double phi = -kPi / 2;
  double purity_weight = 1.0;
};

/// {"x0": int, "theta": f, "phi": f, "P": f}; angles in radians.
InitSpec init_from_json(const json& spec);
/// "x0=0,theta-pi=1/2,phi-pi=-1/2,P=1"; "theta" / "phi" take radians.
InitSpec parse_init(std::string_view text);

/// 17 significant digits.
std::string format_double(double x);

/// step, manhattan_joint_uniform, manhattan_pos_uniform, purity,
/// fidelity_mixed, pos_prob_0 .. pos_prob_{N-1}.
class TrajectoryCsvWriter {
 public:
  TrajectoryCsvWriter(std::ostream& out, int vertex_count, int degree);
  void write(int step, const Matrix& rho);

 private:
  std::ostream& out_;
  int n_;
  int d_;
};

json attractors_to_json(const AttractorBasis& basis);

/// epsilon, t_measured, t_estimated, abs_lambda_prime, abs_overlap.
void write_mixing_csv(std::ostream& out, const MixingReport& report);

}  // namespace percwalk::io
