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

#include "maxcov/offline.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>
#include <unordered_map>

#include "maxcov/errors.hpp"

namespace maxcov {

namespace {

using Words = std::vector<std::uint64_t>;

// Sets re-encoded as bitsets over the compacted universe of the elements they mention.
struct BitSets {
  std::size_t words = 0;
  std::vector<Words> bits;

  template <typename GetElements>
  BitSets(std::size_t count, GetElements&& elements_of) {
    std::unordered_map<ElementId, std::size_t> index;
    for (std::size_t i = 0; i < count; ++i) {
      for (ElementId e : elements_of(i)) index.try_emplace(e, index.size());
    }
    words = (index.size() + 63) / 64;
    bits.assign(count, Words(words, 0));
    for (std::size_t i = 0; i < count; ++i) {
      for (ElementId e : elements_of(i)) {
        const std::size_t b = index.at(e);
        bits[i][b / 64] |= 1ULL << (b % 64);
      }
    }
  }
};

std::size_t popcount(const Words& w) {
  std::size_t total = 0;
  for (auto x : w) total += static_cast<std::size_t>(std::popcount(x));
  return total;
}

void unite(Words& dst, const Words& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}

std::vector<std::size_t> order_by_id(const std::vector<SetRecord>& sets) {
  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sets[a].set_id < sets[b].set_id; });
  return order;
}

void check_cap(std::uint64_t candidates, const OracleLimits& limits, const char* what) {
  if (candidates > limits.max_candidates) {
    throw OracleTooLarge(std::string(what) + " would enumerate " + std::to_string(candidates) +
                         " candidates (cap " + std::to_string(limits.max_candidates) + ")");
  }
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

// Candidate ordering shared by the exhaustive oracles: larger value first, then
// fewer chosen items, then lexicographically smaller sorted ID list.
bool better_ids(const std::vector<SetId>& a, const std::vector<SetId>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Solution finish(const SetSystem& system, std::vector<SetId> ids) {
  Solution sol;
  std::sort(ids.begin(), ids.end());
  sol.exact_coverage = system.coverage(ids);
  sol.chosen_ids = std::move(ids);
  return sol;
}

}  // namespace

OracleLimits OracleLimits::from_env() {
  OracleLimits limits;
  if (const char* raw = std::getenv("STREAM_MAXCOV_ORACLE_CAP")) {
    try {
      limits.max_candidates = std::stoull(raw);
    } catch (const std::exception&) {
      throw DomainError(std::string("STREAM_MAXCOV_ORACLE_CAP is not an integer: ") + raw);
    }
  }
  return limits;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(result);
}

SetSystem SetSystem::collect(SetStream& stream) {
  SetSystem sys;
  sys.universe_size = stream.universe_size();
  sys.kind = stream.kind();
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) sys.sets.push_back(*rec);
  return sys;
}

const SetRecord* SetSystem::find(SetId id) const {
  for (const auto& rec : sets) {
    if (rec.set_id == id) return &rec;
  }
  return nullptr;
}

std::size_t SetSystem::coverage(std::span<const SetId> ids) const {
  std::unordered_set<ElementId> covered;
  for (SetId id : ids) {
    const SetRecord* rec = find(id);
    if (rec == nullptr) throw DomainError("unknown set id " + std::to_string(id));
    covered.insert(rec->elements.begin(), rec->elements.end());
  }
  return covered.size();
}

Solution brute_force_opt(const SetSystem& system, std::size_t k, const OracleLimits& limits) {
  const auto order = order_by_id(system.sets);
  const std::size_t m = order.size();
  const std::size_t r = std::min(k, m);
  check_cap(binomial(m, r), limits, "brute_force_opt");

  BitSets bs(m, [&](std::size_t i) -> const std::vector<ElementId>& {
    return system.sets[order[i]].elements;
  });
  std::vector<Words> prefix(r + 1, Words(bs.words, 0));
  std::vector<std::size_t> pick(r);
  std::vector<std::size_t> best_pick;
  std::size_t best = 0;
  bool have_best = false;

  // Lexicographic enumeration; a strict improvement keeps the smallest ID list among ties.
  auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == r) {
      const std::size_t value = popcount(prefix[r]);
      if (!have_best || value > best) {
        best = value;
        best_pick = pick;
        have_best = true;
      }
      return;
    }
    for (std::size_t i = start; i + (r - depth) <= m; ++i) {
      pick[depth] = i;
      prefix[depth + 1] = prefix[depth];
      unite(prefix[depth + 1], bs.bits[i]);
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);

  std::vector<SetId> ids;
  for (std::size_t i : best_pick) ids.push_back(system.sets[order[i]].set_id);
  Solution sol = finish(system, std::move(ids));
  sol.ledger.observe_set_ids(m);
  return sol;
}

Solution greedy_opt(const SetSystem& system, std::size_t k) {
  const auto order = order_by_id(system.sets);
  std::vector<Leftover> all;
  all.reserve(order.size());
  for (std::size_t i : order) all.push_back({system.sets[i].set_id, system.sets[i].elements});
  CoveredSet covered;
  Solution sol;
  sol.trace = greedy_pick_from_leftovers(all, covered, k);
  for (const auto& step : sol.trace) sol.chosen_ids.push_back(step.id);
  sol.exact_coverage = covered.size();
  return sol;
}

std::vector<PickStep> greedy_pick_from_leftovers(std::span<const Leftover> leftovers,
                                                 CoveredSet& covered, std::size_t slots) {
  std::vector<PickStep> steps;
  std::vector<bool> used(leftovers.size(), false);
  while (steps.size() < slots) {
    std::size_t best_gain = 0;
    std::size_t best_index = leftovers.size();
    for (std::size_t i = 0; i < leftovers.size(); ++i) {
      if (used[i]) continue;
      std::size_t gain = 0;
      for (ElementId e : leftovers[i].residual) gain += covered.count(e) == 0 ? 1 : 0;
      const bool better =
          gain > best_gain ||
          (gain == best_gain && gain > 0 && leftovers[i].id < leftovers[best_index].id);
      if (better) {
        best_gain = gain;
        best_index = i;
      }
    }
    if (best_gain == 0) break;
    used[best_index] = true;
    covered.insert(leftovers[best_index].residual.begin(), leftovers[best_index].residual.end());
    steps.push_back({leftovers[best_index].id, best_gain, covered.size()});
  }
  return steps;
}

std::vector<PickStep> exact_pick_from_leftovers(std::span<const Leftover> leftovers,
                                                CoveredSet& covered, std::size_t slots,
                                                const OracleLimits& limits) {
  std::vector<std::size_t> order(leftovers.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return leftovers[a].id < leftovers[b].id; });
  const std::size_t w = order.size();
  const std::size_t s = std::min(slots, w);
  std::uint64_t candidates = 0;
  for (std::size_t j = 0; j <= s; ++j) candidates = saturating_add(candidates, binomial(w, j));
  check_cap(candidates, limits, "exact_pick_from_leftovers");

  // Only elements not yet covered matter.
  std::vector<std::vector<ElementId>> fresh(w);
  for (std::size_t i = 0; i < w; ++i) {
    for (ElementId e : leftovers[order[i]].residual) {
      if (covered.count(e) == 0) fresh[i].push_back(e);
    }
  }
  BitSets bs(w, [&](std::size_t i) -> const std::vector<ElementId>& { return fresh[i]; });

  std::vector<std::size_t> best_pick;
  std::size_t best = 0;
  std::vector<std::size_t> pick;
  std::vector<Words> prefix(s + 1, Words(bs.words, 0));
  // Sizes ascending, lexicographic within a size: strict improvement keeps the
  // smallest, then lexicographically first, optimal subset.
  for (std::size_t size = 1; size <= s; ++size) {
    pick.assign(size, 0);
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
      if (depth == size) {
        const std::size_t value = popcount(prefix[size]);
        if (value > best) {
          best = value;
          best_pick = pick;
        }
        return;
      }
      for (std::size_t i = start; i + (size - depth) <= w; ++i) {
        pick[depth] = i;
        prefix[depth + 1] = prefix[depth];
        unite(prefix[depth + 1], bs.bits[i]);
        self(self, depth + 1, i + 1);
      }
    };
    recurse(recurse, 0, 0);
  }

  // Report picks in order of decreasing marginal gain so the trace reads like a greedy run.
  std::vector<Leftover> chosen;
  for (std::size_t i : best_pick) chosen.push_back({leftovers[order[i]].id, fresh[i]});
  std::vector<PickStep> steps;
  std::vector<bool> done(chosen.size(), false);
  for (std::size_t round = 0; round < chosen.size(); ++round) {
    std::size_t arg = chosen.size();
    std::size_t arg_gain = 0;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (done[i]) continue;
      std::size_t gain = 0;
      for (ElementId e : chosen[i].residual) gain += covered.count(e) == 0 ? 1 : 0;
      if (arg == chosen.size() || gain > arg_gain) {
        arg = i;
        arg_gain = gain;
      }
    }
    done[arg] = true;
    covered.insert(chosen[arg].residual.begin(), chosen[arg].residual.end());
    steps.push_back({chosen[arg].id, arg_gain, covered.size()});
  }
  return steps;
}

Solution brute_force_budgeted(const SetSystem& system, double budget, const OracleLimits& limits) {
  const std::size_t m = system.sets.size();
  if (m > 25) {
    throw OracleTooLarge("brute_force_budgeted supports at most 25 sets, got " + std::to_string(m));
  }
  check_cap(1ULL << m, limits, "brute_force_budgeted");
  const auto order = order_by_id(system.sets);
  BitSets bs(m, [&](std::size_t i) -> const std::vector<ElementId>& {
    return system.sets[order[i]].elements;
  });
  const double slack = 1e-9 * std::max(1.0, budget);

  std::vector<Words> prefix(m + 1, Words(bs.words, 0));
  std::vector<SetId> current;
  std::vector<SetId> best_ids;
  std::size_t best = 0;
  double best_cost = 0.0;

  auto recurse = [&](auto&& self, std::size_t i, double cost) -> void {
    if (i == m) {
      const std::size_t value = popcount(prefix[m]);
      if (value > best || (value == best && cost < best_cost) ||
          (value == best && cost == best_cost && better_ids(current, best_ids))) {
        best = value;
        best_cost = cost;
        best_ids = current;
      }
      return;
    }
    const SetRecord& rec = system.sets[order[i]];
    if (cost + rec.cost <= budget + slack) {
      prefix[i + 1] = prefix[i];
      unite(prefix[i + 1], bs.bits[i]);
      current.push_back(rec.set_id);
      self(self, i + 1, cost + rec.cost);
      current.pop_back();
    }
    prefix[i + 1] = prefix[i];
    self(self, i + 1, cost);
  };
  recurse(recurse, 0, 0.0);
  return finish(system, std::move(best_ids));
}

Solution brute_force_group(const SetSystem& system, std::span<const std::size_t> quotas,
                           const OracleLimits& limits) {
  const std::size_t groups = quotas.size();
  std::vector<std::size_t> group_sizes(groups, 0);
  for (const auto& rec : system.sets) {
    if (rec.group >= groups) {
      throw FormatError("set " + std::to_string(rec.set_id) + " has group " +
                        std::to_string(rec.group) + " but only " + std::to_string(groups) +
                        " quotas were given");
    }
    ++group_sizes[rec.group];
  }
  std::uint64_t candidates = 1;
  for (std::size_t g = 0; g < groups; ++g) {
    std::uint64_t per_group = 0;
    for (std::size_t j = 0; j <= std::min(quotas[g], group_sizes[g]); ++j) {
      per_group = saturating_add(per_group, binomial(group_sizes[g], j));
    }
    candidates = saturating_mul(candidates, per_group);
  }
  check_cap(candidates, limits, "brute_force_group");

  const auto order = order_by_id(system.sets);
  const std::size_t m = order.size();
  BitSets bs(m, [&](std::size_t i) -> const std::vector<ElementId>& {
    return system.sets[order[i]].elements;
  });
  std::vector<Words> prefix(m + 1, Words(bs.words, 0));
  std::vector<std::size_t> used(groups, 0);
  std::vector<SetId> current;
  std::vector<SetId> best_ids;
  std::size_t best = 0;

  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      const std::size_t value = popcount(prefix[m]);
      if (value > best || (value == best && better_ids(current, best_ids))) {
        best = value;
        best_ids = current;
      }
      return;
    }
    const SetRecord& rec = system.sets[order[i]];
    if (used[rec.group] < quotas[rec.group]) {
      prefix[i + 1] = prefix[i];
      unite(prefix[i + 1], bs.bits[i]);
      ++used[rec.group];
      current.push_back(rec.set_id);
      self(self, i + 1);
      current.pop_back();
      --used[rec.group];
    }
    prefix[i + 1] = prefix[i];
    self(self, i + 1);
  };
  recurse(recurse, 0);
  return finish(system, std::move(best_ids));
}

double cover_value(const Hypergraph& graph, std::span<const NodeId> chosen) {
  std::unordered_set<NodeId> s(chosen.begin(), chosen.end());
  double total = 0.0;
  for (const auto& e : graph.edges) {
    for (NodeId v : e.nodes) {
      if (s.count(v) != 0) {
        total += e.weight;
        break;
      }
    }
  }
  return total;
}

std::size_t cover_count(const Hypergraph& graph, std::span<const NodeId> chosen) {
  std::unordered_set<NodeId> s(chosen.begin(), chosen.end());
  std::size_t total = 0;
  for (const auto& e : graph.edges) {
    for (NodeId v : e.nodes) {
      if (s.count(v) != 0) {
        ++total;
        break;
      }
    }
  }
  return total;
}

Solution brute_force_vertex(const Hypergraph& graph, std::size_t k, const OracleLimits& limits) {
  const std::size_t n = graph.nodes.size();
  const std::size_t r = std::min(k, n);
  check_cap(binomial(n, r), limits, "brute_force_vertex");

  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(graph.nodes[i], i);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    for (NodeId v : graph.edges[e].nodes) incident[index.at(v)].push_back(e);
  }

  std::vector<std::size_t> hits(graph.edges.size(), 0);
  std::vector<std::size_t> pick(r);
  std::vector<std::size_t> best_pick;
  double best = -1.0;
  double value = 0.0;

  auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == r) {
      // Tolerance absorbs drift from incremental add/subtract of weights.
      if (value > best + 1e-9 * std::max(1.0, best)) {
        best = value;
        best_pick = pick;
      }
      return;
    }
    for (std::size_t i = start; i + (r - depth) <= n; ++i) {
      pick[depth] = i;
      for (std::size_t e : incident[i]) {
        if (hits[e]++ == 0) value += graph.edges[e].weight;
      }
      self(self, depth + 1, i + 1);
      for (std::size_t e : incident[i]) {
        if (--hits[e] == 0) value -= graph.edges[e].weight;
      }
    }
  };
  recurse(recurse, 0, 0);

  Solution sol;
  for (std::size_t i : best_pick) sol.chosen_ids.push_back(graph.nodes[i]);
  sol.exact_coverage = cover_count(graph, sol.chosen_ids);
  sol.estimated_coverage = cover_value(graph, sol.chosen_ids);
  sol.ledger.observe_set_ids(r);
  return sol;
}

}  // namespace maxcov
