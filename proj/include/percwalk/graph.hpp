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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "percwalk/core.hpp"

namespace percwalk {

using EdgeId = int;
/// Edge slot that is permanently broken (line boundary).
inline constexpr EdgeId kNoEdge = -1;

enum class GraphKind { cycle, line, general };

const char* to_string(GraphKind kind);

/// A d-regular simple graph whose vertices carry direction labels 0..d-1.
///
/// Direction c at vertex a points to neighbor(a, c). For cycles and lines,
/// direction 0 steps toward a-1 and direction 1 toward a+1 (modulo N). A line
/// is a cycle whose wrap-around slots are bound to kNoEdge, so every
/// configuration reflects there. The 2-cycle has a single edge that governs
/// all four slots.
///
/// Edge ids are assigned in ascending (min-vertex, direction) order, so bit e
/// of a configuration mask always refers to the same edge.
class PercolationGraph {
 public:
  static PercolationGraph make_cycle(int n);
  static PercolationGraph make_line(int n);
  /// table[a][c] = neighbor of a in direction c. Throws ConfigError unless
  /// the table is d-regular, simple and symmetric.
  static PercolationGraph from_adjacency(int n, int d, const std::vector<std::vector<int>>& table);

  int vertex_count() const { return n_; }
  int degree() const { return d_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  GraphKind kind() const { return kind_; }
  /// Hilbert-space dimension d·N.
  int dimension() const { return n_ * d_; }
  /// Basis index of |a, c⟩ = |a⟩ ⊗ |c⟩.
  int index(int a, int c) const { return a * d_ + c; }

  int neighbor(int a, int c) const { return neighbors_[slot(a, c)]; }
  EdgeId edge(int a, int c) const { return edge_ids_[slot(a, c)]; }
  /// Direction at neighbor(a, c) that points back to a.
  int reverse_direction(int a, int c) const { return reverse_[slot(a, c)]; }
  /// Unordered endpoints (min, max) of each edge, indexed by EdgeId.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Same vertex count, degree, neighbor table and edge numbering; ignores kind.
  bool structurally_equal(const PercolationGraph& other) const;

 private:
  PercolationGraph() = default;
  std::size_t slot(int a, int c) const { return static_cast<std::size_t>(a) * d_ + c; }
  void assign_edges();

  int n_ = 0;
  int d_ = 0;
  GraphKind kind_ = GraphKind::general;
  std::vector<int> neighbors_;
  std::vector<EdgeId> edge_ids_;
  std::vector<int> reverse_;
  std::vector<std::pair<int, int>> edges_;
};

/// A subset of the edges of one graph, present during a single step.
class EdgeConfig {
 public:
  EdgeConfig() = default;
  explicit EdgeConfig(int edge_count) : present_(static_cast<std::size_t>(edge_count), false) {}

  static EdgeConfig empty(const PercolationGraph& g) { return EdgeConfig(g.edge_count()); }
  static EdgeConfig full(const PercolationGraph& g);
  /// Bit e of `mask` marks edge e present.
  static EdgeConfig from_mask(const PercolationGraph& g, std::uint64_t mask);

  int edge_count() const { return static_cast<int>(present_.size()); }
  bool contains(EdgeId e) const { return e != kNoEdge && present_[static_cast<std::size_t>(e)]; }
  void set(EdgeId e, bool present);
  int count() const;
  std::vector<EdgeId> members() const;

  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;

 private:
  std::vector<bool> present_;
};

/// π_K(p) = p^|K| (1-p)^(|E|-|K|).
double config_probability(const PercolationGraph& g, const EdgeConfig& k, double p);

inline constexpr int kDefaultEnumerationCap = 20;

/// All 2^|E| configurations in ascending bitmask order. Throws NumericalError
/// when |E| exceeds `cap`; larger graphs must use the local channel.
std::vector<EdgeConfig> enumerate_configs(const PercolationGraph& g, int cap = kDefaultEnumerationCap);

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng);

/// Seed for stream `index` derived from a master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Each edge present independently with probability p.
EdgeConfig sample_config(const PercolationGraph& g, double p, Rng& rng);

}  // namespace percwalk
