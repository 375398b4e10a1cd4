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

#include "maxcov/vertexcover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>

#include "maxcov/errors.hpp"
#include "maxcov/hashing.hpp"

namespace maxcov {

namespace {

constexpr std::uint64_t kSampleTag = 0x5A3B1EULL;
constexpr std::uint64_t kSparsifyTag = 0x5BA125ULL;
constexpr std::uint64_t kVerifyTag = 0x7E21F9ULL;

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

bool contains(std::span<const NodeId> sorted, NodeId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::vector<NodeId> sorted_copy(std::span<const NodeId> subset) {
  std::vector<NodeId> s(subset.begin(), subset.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Cuts of one graph evaluated on membership masks over its node list.
class CutEvaluator {
 public:
  explicit CutEvaluator(const Hypergraph& graph) : graph_(graph) {
    std::unordered_map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) index.emplace(graph.nodes[i], i);
    edges_.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
      std::vector<std::size_t> ids;
      for (NodeId v : e.nodes) {
        auto it = index.find(v);
        if (it == index.end()) throw DomainError("edge references node " + std::to_string(v) + " outside the node set");
        ids.push_back(it->second);
      }
      edges_.push_back(std::move(ids));
    }
  }

  double cut(const std::vector<char>& in) const {
    double total = 0.0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      std::size_t inside = 0;
      for (std::size_t i : edges_[e]) inside += in[i] != 0 ? 1 : 0;
      if (inside > 0 && inside < edges_[e].size()) total += graph_.edges[e].weight;
    }
    return total;
  }

 private:
  const Hypergraph& graph_;
  std::vector<std::vector<std::size_t>> edges_;
};

Solution greedy_weighted_cover(const Hypergraph& graph, std::size_t k) {
  const std::size_t n = graph.nodes.size();
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(graph.nodes[i], i);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    for (NodeId v : graph.edges[e].nodes) incident[index.at(v)].push_back(e);
  }
  std::vector<char> covered(graph.edges.size(), 0);
  auto gain_of = [&](std::size_t i) {
    double g = 0.0;
    for (std::size_t e : incident[i]) {
      if (covered[e] == 0) g += graph.edges[e].weight;
    }
    return g;
  };

  struct Entry {
    double gain;
    std::size_t index;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.index > b.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < n; ++i) heap.push({gain_of(i), i});

  Solution sol;
  double value = 0.0;
  while (sol.chosen_ids.size() < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    const double fresh = gain_of(top.index);
    const double tol = 1e-9 * std::max(1.0, fresh);
    bool accept = heap.empty();
    if (!accept) {
      const Entry& next = heap.top();
      accept = fresh > next.gain + tol || (fresh >= next.gain - tol && top.index < next.index);
    }
    if (!accept) {
      heap.push({fresh, top.index});
      continue;
    }
    if (fresh <= tol) break;
    for (std::size_t e : incident[top.index]) covered[e] = 1;
    value += fresh;
    sol.chosen_ids.push_back(graph.nodes[top.index]);
    sol.trace.push_back({graph.nodes[top.index], static_cast<std::size_t>(std::llround(fresh)), 0});
  }
  std::sort(sol.chosen_ids.begin(), sol.chosen_ids.end());
  sol.estimated_coverage = value;
  sol.exact_coverage = cover_count(graph, sol.chosen_ids);
  return sol;
}

std::size_t default_trials(std::size_t n, const NearRegularOptions& options) {
  if (options.trials != 0) return options.trials;
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options.c1 * ln_n)));
}

bool needs_fallback(std::size_t n, std::size_t k, std::size_t rank, double eps) {
  return rank > 0 && static_cast<double>(n) < 4.0 * static_cast<double>(k * rank) / eps;
}

NearRegularResult fallback_solve(const Hypergraph& graph, std::size_t k, double eps,
                                 const NearRegularOptions& options) {
  SparsifiedSolveOptions solve;
  solve.seed = derive_seed(options.seed, kSparsifyTag);
  solve.limits = options.limits;
  const std::size_t r = std::min(k, graph.nodes.size());
  solve.strategy = binomial(graph.nodes.size(), r) <= options.limits.max_candidates
                       ? CoverStrategy::exhaustive
                       : CoverStrategy::greedy;
  NearRegularResult out;
  out.solution = solve_on_sparsifier(graph, k, eps, solve);
  out.used_fallback = true;
  return out;
}

// Ties: lexicographically smaller node list.
std::size_t best_sample(const std::vector<SampleRecord>& samples) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].cover > samples[best].cover ||
        (samples[i].cover == samples[best].cover && samples[i].nodes < samples[best].nodes)) {
      best = i;
    }
  }
  return best;
}

}  // namespace

ApexGraph augment_with_apex(const Hypergraph& graph) {
  ApexGraph out;
  out.apex = graph.nodes.empty() ? 0 : graph.nodes.back() + 1;
  out.graph.nodes = graph.nodes;
  out.graph.nodes.push_back(out.apex);
  out.graph.edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    Hyperedge h = e;
    h.nodes.push_back(out.apex);
    out.graph.edges.push_back(std::move(h));
  }
  return out;
}

double cut_value(const Hypergraph& graph, std::span<const NodeId> subset) {
  const auto s = sorted_copy(subset);
  double total = 0.0;
  for (const auto& e : graph.edges) {
    std::size_t inside = 0;
    for (NodeId v : e.nodes) inside += contains(s, v) ? 1 : 0;
    if (inside > 0 && inside < e.nodes.size()) total += e.weight;
  }
  return total;
}

DegreeStats degree_stats(const Hypergraph& graph) {
  std::unordered_map<NodeId, std::size_t> degree;
  for (NodeId v : graph.nodes) degree[v] = 0;
  for (const auto& e : graph.edges) {
    for (NodeId v : e.nodes) ++degree[v];
  }
  DegreeStats stats;
  if (degree.empty()) return stats;
  stats.min_degree = degree.begin()->second;
  for (const auto& [v, d] : degree) {
    stats.min_degree = std::min(stats.min_degree, d);
    stats.max_degree = std::max(stats.max_degree, d);
  }
  stats.kappa = stats.max_degree == 0
                    ? 0.0
                    : static_cast<double>(stats.min_degree) / static_cast<double>(stats.max_degree);
  return stats;
}

std::size_t overlap_loss(const Hypergraph& graph, std::span<const NodeId> subset) {
  const auto s = sorted_copy(subset);
  std::size_t loss = 0;
  for (const auto& e : graph.edges) {
    std::size_t inside = 0;
    for (NodeId v : e.nodes) inside += contains(s, v) ? 1 : 0;
    if (inside > 1) loss += inside - 1;
  }
  return loss;
}

NearRegularResult near_regular_sample(const Hypergraph& graph, std::size_t k, double eps,
                                      const NearRegularOptions& options) {
  require_eps(eps);
  const std::size_t n = graph.nodes.size();
  if (k > n) throw DomainError("k exceeds the number of nodes");
  if (options.allow_fallback && needs_fallback(n, k, graph.rank(), eps)) {
    return fallback_solve(graph, k, eps, options);
  }

  const DegreeStats stats = degree_stats(graph);
  NearRegularResult out;
  out.trials = default_trials(n, options);
  for (std::size_t t = 0; t < out.trials; ++t) {
    std::mt19937_64 rng(derive_seed(options.seed, kSampleTag, t));
    SampleRecord rec;
    std::sample(graph.nodes.begin(), graph.nodes.end(), std::back_inserter(rec.nodes), k, rng);
    rec.cover = cover_count(graph, rec.nodes);
    rec.overlap_loss = overlap_loss(graph, rec.nodes);
    rec.lower_bound = static_cast<double>(k * stats.min_degree) - static_cast<double>(rec.overlap_loss);
    out.samples.push_back(std::move(rec));
  }

  const SampleRecord& best = out.samples[best_sample(out.samples)];
  out.solution.chosen_ids = best.nodes;
  out.solution.exact_coverage = best.cover;
  out.solution.estimated_coverage = cover_value(graph, best.nodes);
  out.solution.ledger.set_id_slots = out.trials * k;
  out.solution.ledger.passes = 1;
  return out;
}

NearRegularResult near_regular_sample_stream(std::span<const EdgeUpdate> updates,
                                             std::uint64_t node_count, std::size_t k, double eps,
                                             const NearRegularOptions& options) {
  require_eps(eps);
  if (k > node_count) throw DomainError("k exceeds the number of nodes");
  const std::size_t n = static_cast<std::size_t>(node_count);
  const std::size_t trials = default_trials(n, options);

  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  std::vector<std::vector<NodeId>> samples(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(options.seed, kSampleTag, t));
    std::sample(all.begin(), all.end(), std::back_inserter(samples[t]), k, rng);
  }

  std::vector<long long> cover(trials, 0);
  std::vector<long long> loss(trials, 0);
  std::vector<long long> degree(n, 0);
  std::size_t rank = 0;
  for (const EdgeUpdate& u : updates) {
    const long long sign = u.sign == EdgeUpdate::Sign::insert ? 1 : -1;
    rank = std::max(rank, u.nodes.size());
    for (NodeId v : u.nodes) {
      if (v >= node_count) throw DomainError("update references node " + std::to_string(v) + " beyond node_count");
      degree[static_cast<std::size_t>(v)] += sign;
    }
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t inside = 0;
      for (NodeId v : u.nodes) inside += contains(samples[t], v) ? 1 : 0;
      if (inside > 0) {
        cover[t] += sign;
        loss[t] += sign * static_cast<long long>(inside - 1);
      }
    }
  }

  if (options.allow_fallback && needs_fallback(n, k, rank, eps)) {
    return fallback_solve(materialize_graph(updates), k, eps, options);
  }

  const long long t1 = degree.empty() ? 0 : *std::min_element(degree.begin(), degree.end());
  NearRegularResult out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    SampleRecord rec;
    rec.nodes = samples[t];
    rec.cover = static_cast<std::size_t>(std::max<long long>(cover[t], 0));
    rec.overlap_loss = static_cast<std::size_t>(std::max<long long>(loss[t], 0));
    rec.lower_bound = static_cast<double>(static_cast<long long>(k) * t1 - loss[t]);
    out.samples.push_back(std::move(rec));
  }
  const SampleRecord& best = out.samples[best_sample(out.samples)];
  out.solution.chosen_ids = best.nodes;
  out.solution.exact_coverage = best.cover;
  out.solution.estimated_coverage = static_cast<double>(best.cover);
  out.solution.ledger.set_id_slots = trials * k;
  out.solution.ledger.sketch_registers = 2 * trials;
  out.solution.ledger.passes = 1;
  return out;
}

Hypergraph identity_sparsifier(const Hypergraph& graph, double /*eps*/, std::uint64_t /*seed*/) {
  return graph;
}

double reference_keep_probability(std::size_t node_count, double eps, double rho) {
  if (node_count <= 1) return 1.0;
  const double n = static_cast<double>(node_count);
  return std::min(1.0, rho * std::log(n) / (eps * eps * n));
}

Hypergraph sparsify_reference(const Hypergraph& graph, double eps, std::uint64_t seed, double rho) {
  require_eps(eps);
  if (graph.nodes.empty()) throw DomainError("cannot sparsify an empty graph");
  const double q = reference_keep_probability(graph.nodes.size(), eps, rho);
  if (q >= 1.0) return graph;
  Hypergraph out;
  out.nodes = graph.nodes;
  std::mt19937_64 rng(derive_seed(seed, kSparsifyTag));
  std::bernoulli_distribution keep(q);
  for (const auto& e : graph.edges) {
    if (!keep(rng)) continue;
    Hyperedge h = e;
    h.weight = e.weight / q;
    out.edges.push_back(std::move(h));
  }
  return out;
}

SparsifierReport verify_sparsifier(const Hypergraph& g, const Hypergraph& h, double eps,
                                   std::size_t sample_size, std::uint64_t seed) {
  if (g.nodes != h.nodes) throw DomainError("sparsifier node set differs from the graph");
  const std::size_t n = g.nodes.size();
  const CutEvaluator eval_g(g);
  const CutEvaluator eval_h(h);
  SparsifierReport report;

  auto check = [&](const std::vector<char>& in) {
    const double dg = eval_g.cut(in);
    if (!(dg > 0.0)) return;
    const double dh = eval_h.cut(in);
    ++report.cuts_checked;
    const double ratio = dh / dg;
    if (std::abs(ratio - 1.0) > std::abs(report.worst_ratio - 1.0)) report.worst_ratio = ratio;
    const double tol = 1e-9 * dg;
    if (dh < (1.0 - eps) * dg - tol || dh > (1.0 + eps) * dg + tol) {
      ++report.violations;
      report.passed = false;
    }
  };

  std::vector<char> in(n, 0);
  if (n <= 16) {
    report.exhaustive = true;
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      for (std::size_t i = 0; i < n; ++i) in[i] = static_cast<char>((mask >> i) & 1U);
      check(in);
    }
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(in.begin(), in.end(), 0);
    in[i] = 1;
    check(in);
  }
  std::mt19937_64 rng(derive_seed(seed, kVerifyTag));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t s = 0; s < sample_size; ++s) {
    for (std::size_t i = 0; i < n; ++i) in[i] = coin(rng) ? 1 : 0;
    check(in);
  }
  return report;
}

Solution solve_on_sparsifier(const Hypergraph& graph, std::size_t k, double eps,
                             const SparsifiedSolveOptions& options) {
  require_eps(eps);
  const ApexGraph augmented = augment_with_apex(graph);
  const Hypergraph h = options.sparsifier(augmented.graph, eps / 2.0, options.seed);

  // For S inside V(G) every edge of H holds the apex outside S, so the cut of S
  // is the weighted cover of S on H with the apex removed.
  Hypergraph reduced;
  reduced.nodes = graph.nodes;
  for (const auto& e : h.edges) {
    Hyperedge stripped;
    stripped.weight = e.weight;
    for (NodeId v : e.nodes) {
      if (v == augmented.apex) continue;
      if (!std::binary_search(graph.nodes.begin(), graph.nodes.end(), v)) {
        throw DomainError("sparsifier introduced node " + std::to_string(v));
      }
      stripped.nodes.push_back(v);
    }
    if (!stripped.nodes.empty()) reduced.edges.push_back(std::move(stripped));
  }

  Solution sol = options.strategy == CoverStrategy::exhaustive
                     ? brute_force_vertex(reduced, k, options.limits)
                     : greedy_weighted_cover(reduced, k);
  sol.estimated_coverage = cover_value(reduced, sol.chosen_ids);
  sol.exact_coverage = cover_count(graph, sol.chosen_ids);
  sol.ledger.element_slots = h.edges.size();
  sol.ledger.passes = 1;
  return sol;
}

}  // namespace maxcov
