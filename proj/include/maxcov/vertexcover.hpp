// Copyright 2026 The Authors.
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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "maxcov/offline.hpp"
#include "maxcov/setstream.hpp"

namespace maxcov {

// G' = G plus one extra node (the apex) added to every edge. For S inside V(G),
// the cut of S in G' equals the number of G-edges S touches.
struct ApexGraph {
  Hypergraph graph;
  NodeId apex = 0;  // 1 + largest node of G, or 0 for an empty graph
};

ApexGraph augment_with_apex(const Hypergraph& graph);

// Total weight of edges with at least one node inside S and one outside.
double cut_value(const Hypergraph& graph, std::span<const NodeId> subset);

struct DegreeStats {
  std::size_t min_degree = 0;  // t1
  std::size_t max_degree = 0;  // t2
  double kappa = 0.0;          // t1 / t2, or 0 for an edgeless graph
};

DegreeStats degree_stats(const Hypergraph& graph);

// Sum over edges y of max(0, |y cap S| - 1).
std::size_t overlap_loss(const Hypergraph& graph, std::span<const NodeId> subset);

struct SampleRecord {
  std::vector<NodeId> nodes;  // sorted
  std::size_t cover = 0;
  std::size_t overlap_loss = 0;
  // k t1 - overlap_loss; never above `cover`.
  double lower_bound = 0.0;
};

struct NearRegularOptions {
  std::size_t trials = 0;  // 0 means ceil(c1 ln N)
  double c1 = 7.0;
  std::uint64_t seed = 42;
  bool allow_fallback = true;  // sparsify-and-solve when N < 4 k d / eps
  OracleLimits limits;
};

struct NearRegularResult {
  Solution solution;
  std::vector<SampleRecord> samples;
  std::size_t trials = 0;
  bool used_fallback = false;
};

// Best of `trials` uniform k-subsets of the graph's nodes by cover count
// (ties: lexicographically smallest node list).
NearRegularResult near_regular_sample(const Hypergraph& graph, std::size_t k, double eps,
                                      const NearRegularOptions& options = {});

// One pass over an update stream on nodes [0, node_count). Samples are drawn up
// front; each keeps a signed cover counter, so deletions are handled exactly.
NearRegularResult near_regular_sample_stream(std::span<const EdgeUpdate> updates,
                                             std::uint64_t node_count, std::size_t k, double eps,
                                             const NearRegularOptions& options = {});

// A sparsifier maps (graph, eps, seed) to a weighted graph on the same nodes.
using Sparsifier = std::function<Hypergraph(const Hypergraph&, double, std::uint64_t)>;

Hypergraph identity_sparsifier(const Hypergraph& graph, double eps, std::uint64_t seed);

// Keeps each edge with probability q = min(1, rho eps^-2 ln N / N), reweighted by 1/q.
Hypergraph sparsify_reference(const Hypergraph& graph, double eps, std::uint64_t seed,
                              double rho = 8.0);
double reference_keep_probability(std::size_t node_count, double eps, double rho = 8.0);

struct SparsifierReport {
  bool passed = true;
  bool exhaustive = false;
  std::size_t cuts_checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 1.0;  // delta_H / delta_G furthest from 1
};

// Checks (1-eps) delta_G(S) <= delta_H(S) <= (1+eps) delta_G(S) for cuts with
// delta_G(S) > 0: every S when N <= 16, otherwise `sample_size` random S plus
// all singletons.
SparsifierReport verify_sparsifier(const Hypergraph& g, const Hypergraph& h, double eps,
                                   std::size_t sample_size = 256, std::uint64_t seed = 42);

enum class CoverStrategy { exhaustive, greedy };

struct SparsifiedSolveOptions {
  CoverStrategy strategy = CoverStrategy::exhaustive;
  Sparsifier sparsifier = [](const Hypergraph& g, double eps, std::uint64_t seed) {
    return sparsify_reference(g, eps, seed);
  };
  std::uint64_t seed = 42;
  OracleLimits limits;
};

// Sparsifies G' with eps/2 and maximizes the weighted cut over k-subsets of V(G).
// estimated_coverage is the value on the sparsifier, exact_coverage the count on G.
Solution solve_on_sparsifier(const Hypergraph& graph, std::size_t k, double eps,
                             const SparsifiedSolveOptions& options = {});

}  // namespace maxcov
