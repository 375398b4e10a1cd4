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
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "maxcov/setstream.hpp"

namespace maxcov {

// One selection step: the ID picked, the number of newly covered elements (a_i)
// and the coverage after the pick (b_i).
struct PickStep {
  SetId id = 0;
  std::size_t gain = 0;
  std::size_t covered_after = 0;

  bool operator==(const PickStep&) const = default;
};

struct Solution {
  std::vector<SetId> chosen_ids;  // set IDs, or node IDs for vertex coverage
  std::size_t exact_coverage = 0;
  std::optional<double> estimated_coverage;
  SpaceLedger ledger;
  std::vector<PickStep> trace;
  // Set when a coverage cap cut the run short (guessing framework only).
  bool terminated = false;
};

struct OracleLimits {
  std::uint64_t max_candidates = 10'000'000;

  // Reads STREAM_MAXCOV_ORACLE_CAP when set.
  static OracleLimits from_env();
};

// Saturating binomial coefficient.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// A fully materialized set system for offline oracles.
struct SetSystem {
  std::vector<SetRecord> sets;
  std::uint64_t universe_size = 0;
  StreamKind kind = StreamKind::plain;

  // Reads one full pass of the stream.
  static SetSystem collect(SetStream& stream);
  std::size_t coverage(std::span<const SetId> ids) const;
  const SetRecord* find(SetId id) const;
};

Solution brute_force_opt(const SetSystem& system, std::size_t k, const OracleLimits& limits = {});
Solution greedy_opt(const SetSystem& system, std::size_t k);

struct Leftover {
  SetId id = 0;
  std::vector<ElementId> residual;
};
using CoveredSet = std::unordered_set<ElementId>;

// Repeatedly takes the leftover with the largest residual gain (ties: smallest ID),
// updating `covered`, until `slots` picks are made or every gain is zero.
std::vector<PickStep> greedy_pick_from_leftovers(std::span<const Leftover> leftovers,
                                                 CoveredSet& covered, std::size_t slots);

// Exhaustive version: the subset of at most `slots` leftovers with the largest
// additional coverage (ties: fewer sets, then lexicographically smallest IDs).
std::vector<PickStep> exact_pick_from_leftovers(std::span<const Leftover> leftovers,
                                                CoveredSet& covered, std::size_t slots,
                                                const OracleLimits& limits = {});

// Best subset with total cost <= budget. Requires m <= 25.
Solution brute_force_budgeted(const SetSystem& system, double budget,
                              const OracleLimits& limits = {});

// Best selection with at most quotas[g] sets from group g.
Solution brute_force_group(const SetSystem& system, std::span<const std::size_t> quotas,
                           const OracleLimits& limits = {});

// Total weight of hyperedges that contain at least one node of `chosen`.
double cover_value(const Hypergraph& graph, std::span<const NodeId> chosen);
// Number of hyperedges (with multiplicity) that contain at least one node of `chosen`.
std::size_t cover_count(const Hypergraph& graph, std::span<const NodeId> chosen);

// Best k-node set by weighted cover; exact_coverage holds the edge count,
// estimated_coverage the weighted value.
Solution brute_force_vertex(const Hypergraph& graph, std::size_t k,
                            const OracleLimits& limits = {});

}  // namespace maxcov
