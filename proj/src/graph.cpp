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


#include "percwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace percwalk {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::cycle:
      return "cycle";
    case GraphKind::line:
      return "line";
    case GraphKind::general:
      return "general";
  }
  return "general";
}

namespace {

void check_vertex_count(int n) {
  if (n < 2) throw ConfigError("graph needs at least 2 vertices, got N=" + std::to_string(n));
}

}  // namespace

void PercolationGraph::assign_edges() {
  edge_ids_.assign(neighbors_.size(), kNoEdge);
  edges_.clear();
  for (int a = 0; a < n_; ++a) {
    for (int c = 0; c < d_; ++c) {
      if (edge_ids_[slot(a, c)] != kNoEdge) continue;
      const int b = neighbors_[slot(a, c)];
      if (b < 0) continue;
      const EdgeId id = static_cast<EdgeId>(edges_.size());
      edges_.emplace_back(std::min(a, b), std::max(a, b));
      edge_ids_[slot(a, c)] = id;
      edge_ids_[slot(b, reverse_[slot(a, c)])] = id;
    }
  }
}

PercolationGraph PercolationGraph::make_cycle(int n) {
  check_vertex_count(n);
  PercolationGraph g;
  g.n_ = n;
  g.d_ = 2;
  g.kind_ = GraphKind::cycle;
  g.neighbors_.resize(2 * static_cast<std::size_t>(n));
  g.reverse_.resize(g.neighbors_.size());
  for (int a = 0; a < n; ++a) {
    g.neighbors_[g.slot(a, 0)] = (a + n - 1) % n;
    g.neighbors_[g.slot(a, 1)] = (a + 1) % n;
    g.reverse_[g.slot(a, 0)] = 1;
    g.reverse_[g.slot(a, 1)] = 0;
  }
  if (n == 2) {
    // Both slots of both vertices point at the other vertex; one edge governs all of them.
    g.edges_ = {{0, 1}};
    g.edge_ids_.assign(4, 0);
    return g;
  }
  g.assign_edges();
  return g;
}

PercolationGraph PercolationGraph::make_line(int n) {
  check_vertex_count(n);
  PercolationGraph g;
  g.n_ = n;
  g.d_ = 2;
  g.kind_ = GraphKind::line;
  g.neighbors_.resize(2 * static_cast<std::size_t>(n));
  g.reverse_.resize(g.neighbors_.size());
  for (int a = 0; a < n; ++a) {
    g.neighbors_[g.slot(a, 0)] = (a + n - 1) % n;
    g.neighbors_[g.slot(a, 1)] = (a + 1) % n;
    g.reverse_[g.slot(a, 0)] = 1;
    g.reverse_[g.slot(a, 1)] = 0;
  }
  g.edge_ids_.assign(g.neighbors_.size(), kNoEdge);
  for (int a = 0; a + 1 < n; ++a) {
    const EdgeId id = static_cast<EdgeId>(g.edges_.size());
    g.edges_.emplace_back(a, a + 1);
    g.edge_ids_[g.slot(a, 1)] = id;
    g.edge_ids_[g.slot(a + 1, 0)] = id;
  }
  return g;
}

PercolationGraph PercolationGraph::from_adjacency(int n, int d, const std::vector<std::vector<int>>& table) {
  check_vertex_count(n);
  if (d < 1) throw ConfigError("graph degree must be at least 1");
  if (static_cast<int>(table.size()) != n) {
    throw ConfigError("neighbor table has " + std::to_string(table.size()) + " rows, expected N=" + std::to_string(n));
  }
  PercolationGraph g;
  g.n_ = n;
  g.d_ = d;
  g.kind_ = GraphKind::general;
  g.neighbors_.resize(static_cast<std::size_t>(n) * d);
  g.reverse_.resize(g.neighbors_.size());
  for (int a = 0; a < n; ++a) {
    const auto& row = table[static_cast<std::size_t>(a)];
    if (static_cast<int>(row.size()) != d) {
      throw ConfigError("graph is not " + std::to_string(d) + "-regular: vertex " + std::to_string(a) + " has degree " +
                        std::to_string(row.size()));
    }
    for (int c = 0; c < d; ++c) {
      const int b = row[static_cast<std::size_t>(c)];
      if (b < 0 || b >= n) throw ConfigError("neighbor " + std::to_string(b) + " out of range at vertex " + std::to_string(a));
      if (b == a) throw ConfigError("self-loop at vertex " + std::to_string(a));
      if (std::count(row.begin(), row.end(), b) > 1) {
        throw ConfigError("multi-edge between vertices " + std::to_string(a) + " and " + std::to_string(b));
      }
      g.neighbors_[g.slot(a, c)] = b;
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < d; ++c) {
      const int b = g.neighbor(a, c);
      const auto& back = table[static_cast<std::size_t>(b)];
      const auto it = std::find(back.begin(), back.end(), a);
      if (it == back.end()) {
        throw ConfigError("inconsistent reverse edge: " + std::to_string(a) + " -> " + std::to_string(b) +
                          " has no matching " + std::to_string(b) + " -> " + std::to_string(a));
      }
      g.reverse_[g.slot(a, c)] = static_cast<int>(it - back.begin());
    }
  }
  g.assign_edges();
  return g;
}

bool PercolationGraph::structurally_equal(const PercolationGraph& other) const {
  return n_ == other.n_ && d_ == other.d_ && neighbors_ == other.neighbors_ && edge_ids_ == other.edge_ids_ &&
         edges_ == other.edges_;
}

EdgeConfig EdgeConfig::full(const PercolationGraph& g) {
  EdgeConfig k(g.edge_count());
  k.present_.assign(k.present_.size(), true);
  return k;
}

EdgeConfig EdgeConfig::from_mask(const PercolationGraph& g, std::uint64_t mask) {
  if (g.edge_count() > 64) throw ConfigError("bitmask configurations support at most 64 edges");
  EdgeConfig k(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) k.present_[static_cast<std::size_t>(e)] = ((mask >> e) & 1U) != 0;
  return k;
}

void EdgeConfig::set(EdgeId e, bool present) {
  if (e < 0 || e >= edge_count()) throw ConfigError("edge id " + std::to_string(e) + " not in graph");
  present_[static_cast<std::size_t>(e)] = present;
}

int EdgeConfig::count() const { return static_cast<int>(std::count(present_.begin(), present_.end(), true)); }

std::vector<EdgeId> EdgeConfig::members() const {
  std::vector<EdgeId> out;
  for (std::size_t e = 0; e < present_.size(); ++e) {
    if (present_[e]) out.push_back(static_cast<EdgeId>(e));
  }
  return out;
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("percolation probability must lie in [0, 1], got " + std::to_string(p));
}

}  // namespace

double config_probability(const PercolationGraph& g, const EdgeConfig& k, double p) {
  check_probability(p);
  if (k.edge_count() != g.edge_count()) throw ConfigError("edge configuration does not belong to this graph");
  const int present = k.count();
  return std::pow(p, present) * std::pow(1.0 - p, g.edge_count() - present);
}

std::vector<EdgeConfig> enumerate_configs(const PercolationGraph& g, int cap) {
  if (g.edge_count() > cap) {
    throw NumericalError("enumeration cap exceeded: graph has " + std::to_string(g.edge_count()) + " edges (cap " +
                         std::to_string(cap) + "); use the local-sum channel instead");
  }
  const std::uint64_t total = std::uint64_t{1} << g.edge_count();
  std::vector<EdgeConfig> out;
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) out.push_back(EdgeConfig::from_mask(g, mask));
  return out;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

EdgeConfig sample_config(const PercolationGraph& g, double p, Rng& rng) {
  check_probability(p);
  EdgeConfig k(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) k.set(e, uniform01(rng) < p);
  return k;
}

}  // namespace percwalk
