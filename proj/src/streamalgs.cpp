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

#include "maxcov/streamalgs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "maxcov/errors.hpp"

namespace maxcov {

namespace {

std::size_t count_residual(const SetRecord& rec, const CoveredSet& covered) {
  std::size_t n = 0;
  for (ElementId e : rec.elements) n += covered.count(e) == 0 ? 1 : 0;
  return n;
}

std::vector<ElementId> residual_of(const SetRecord& rec, const CoveredSet& covered) {
  std::vector<ElementId> out;
  for (ElementId e : rec.elements) {
    if (covered.count(e) == 0) out.push_back(e);
  }
  return out;
}

// I, C and the per-pick trace shared by the threshold algorithms.
struct Selection {
  CoveredSet covered;
  std::vector<SetId> chosen;
  std::vector<PickStep> trace;

  void admit(const SetRecord& rec, std::size_t gain) {
    covered.insert(rec.elements.begin(), rec.elements.end());
    chosen.push_back(rec.set_id);
    trace.push_back({rec.set_id, gain, covered.size()});
  }

  Solution to_solution(SpaceLedger ledger) const {
    Solution sol;
    sol.chosen_ids = chosen;
    sol.exact_coverage = covered.size();
    sol.trace = trace;
    sol.ledger = ledger;
    return sol;
  }
};

bool over_cap(const InstanceHooks* hooks, std::size_t covered) {
  return hooks != nullptr && hooks->exceeds_cap(covered);
}

std::size_t hook_registers(const InstanceHooks* hooks) {
  return hooks == nullptr ? 0 : hooks->registers();
}

void require_positive_z(double z, const char* algorithm) {
  if (!(z > 0.0)) throw DomainError(std::string(algorithm) + " needs a positive guess z");
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

Solution terminated(const Selection& sel, SpaceLedger ledger) {
  Solution sol = sel.to_solution(ledger);
  sol.terminated = true;
  return sol;
}

// k = 1: keep the largest set seen so far (ties: smaller ID).
Solution largest_set(SetStream& stream, InstanceHooks* hooks) {
  SpaceLedger ledger;
  SetRecord best;
  bool have = false;
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    const bool better =
        !have || rec->elements.size() > best.elements.size() ||
        (rec->elements.size() == best.elements.size() && rec->set_id < best.set_id);
    if (better && !rec->elements.empty()) {
      best = *rec;
      have = true;
      if (hooks != nullptr) hooks->on_defer(*rec, cursor.original());
      ledger.observe_elements(best.elements.size());
      ledger.observe_set_ids(1);
      ledger.observe_registers(hook_registers(hooks));
    }
  }
  ledger.observe_passes(1);
  Selection sel;
  if (have) {
    sel.admit(best, best.elements.size());
    if (hooks != nullptr) hooks->on_post_pick(best.set_id);
    if (over_cap(hooks, sel.covered.size())) return terminated(sel, ledger);
  }
  return sel.to_solution(ledger);
}

// Shared body of the single-pass threshold algorithm and its boosted variant.
template <typename PostProcess>
Solution threshold_with_leftovers(SetStream& stream, std::size_t k, double threshold,
                                  bool admit_nothing, InstanceHooks* hooks,
                                  PostProcess&& post_process) {
  SpaceLedger ledger;
  Selection sel;
  std::vector<Leftover> leftovers;
  std::size_t leftover_slots = 0;

  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    const std::size_t gain = count_residual(*rec, sel.covered);
    const bool large = !admit_nothing && static_cast<double>(gain) >= threshold;
    if (large && sel.chosen.size() < k) {
      sel.admit(*rec, gain);
      if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
      if (over_cap(hooks, sel.covered.size())) {
        ledger.observe_elements(sel.covered.size() + leftover_slots);
        ledger.observe_passes(1);
        return terminated(sel, ledger);
      }
    } else if (!large) {
      leftovers.push_back({rec->set_id, residual_of(*rec, sel.covered)});
      leftover_slots += leftovers.back().residual.size();
      if (hooks != nullptr && gain > 0) hooks->on_defer(*rec, cursor.original());
    }
    ledger.observe_elements(sel.covered.size() + leftover_slots);
    ledger.observe_set_ids(sel.chosen.size() + leftovers.size());
    ledger.observe_registers(hook_registers(hooks));
  }
  ledger.observe_passes(1);

  // A picked residual is merged into C and released; the rest stay stored.
  const std::size_t slots = k - std::min(k, sel.chosen.size());
  for (const PickStep& step : post_process(leftovers, sel.covered, slots)) {
    sel.chosen.push_back(step.id);
    sel.trace.push_back(step);
    if (hooks != nullptr) hooks->on_post_pick(step.id);
    for (const Leftover& l : leftovers) {
      if (l.id == step.id) {
        leftover_slots -= l.residual.size();
        break;
      }
    }
  }
  ledger.observe_elements(sel.covered.size() + leftover_slots);
  if (over_cap(hooks, sel.covered.size())) return terminated(sel, ledger);
  return sel.to_solution(ledger);
}

double log_base(double x, double base) { return std::log(x) / std::log(base); }

// ceil() that ignores floating noise just above an integer.
std::size_t ceil_tolerant(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<std::size_t>(std::max(r, 0.0));
  return static_cast<std::size_t>(std::max(std::ceil(x), 0.0));
}

void check_groups(const SetRecord& rec, std::size_t groups) {
  if (rec.group >= groups) {
    throw FormatError("set " + std::to_string(rec.set_id) + " belongs to unknown group " +
                      std::to_string(rec.group));
  }
}

}  // namespace

Solution single_pass_threshold(SetStream& stream, std::size_t k, double z, InstanceHooks* hooks) {
  if (k == 1) return largest_set(stream, hooks);
  const double threshold = k == 0 ? 0.0 : z / static_cast<double>(k);
  return threshold_with_leftovers(
      stream, k, threshold, /*admit_nothing=*/z <= 0.0 || k == 0, hooks,
      [](const std::vector<Leftover>& leftovers, CoveredSet& covered, std::size_t slots) {
        return greedy_pick_from_leftovers(leftovers, covered, slots);
      });
}

Solution boosted_single_pass(SetStream& stream, std::size_t k, double z, double b,
                             const OracleLimits& limits, InstanceHooks* hooks) {
  if (!(b >= 1.0)) throw DomainError("boost factor b must be at least 1");
  const double threshold = k == 0 ? 0.0 : b * z / static_cast<double>(k);
  return threshold_with_leftovers(
      stream, k, threshold, /*admit_nothing=*/z <= 0.0 || k == 0, hooks,
      [&limits](const std::vector<Leftover>& leftovers, CoveredSet& covered, std::size_t slots) {
        return exact_pick_from_leftovers(leftovers, covered, slots, limits);
      });
}

std::size_t multi_pass_budget(double eps) {
  require_eps(eps);
  return 1 + ceil_tolerant(log_base(4.0 * std::numbers::e, 1.0 + eps));
}

Solution multi_pass_threshold(SetStream& stream, std::size_t k, double z, double eps,
                              InstanceHooks* hooks) {
  require_positive_z(z, "multi_pass_threshold");
  const std::size_t passes = multi_pass_budget(eps);
  SpaceLedger ledger;
  Selection sel;
  double threshold = z / static_cast<double>(std::max<std::size_t>(k, 1));
  for (std::size_t j = 1; j <= passes && sel.chosen.size() < k; ++j) {
    auto cursor = stream.replay();
    ledger.observe_passes(j);
    while (const SetRecord* rec = cursor.next()) {
      if (sel.chosen.size() >= k) continue;
      const std::size_t gain = count_residual(*rec, sel.covered);
      if (static_cast<double>(gain) < threshold) continue;
      sel.admit(*rec, gain);
      if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
      ledger.observe_elements(sel.covered.size());
      ledger.observe_set_ids(sel.chosen.size());
      ledger.observe_registers(hook_registers(hooks));
      if (over_cap(hooks, sel.covered.size())) return terminated(sel, ledger);
    }
    threshold /= 1.0 + eps;
  }
  return sel.to_solution(ledger);
}

Solution half_single_pass(SetStream& stream, std::size_t k, double z, InstanceHooks* hooks) {
  require_positive_z(z, "half_single_pass");
  SpaceLedger ledger;
  Selection sel;
  const double threshold = z / (2.0 * static_cast<double>(std::max<std::size_t>(k, 1)));
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    if (sel.chosen.size() >= k) continue;
    const std::size_t gain = count_residual(*rec, sel.covered);
    if (static_cast<double>(gain) < threshold) continue;
    sel.admit(*rec, gain);
    if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
    ledger.observe_elements(sel.covered.size());
    ledger.observe_set_ids(sel.chosen.size());
    ledger.observe_registers(hook_registers(hooks));
    if (over_cap(hooks, sel.covered.size())) {
      ledger.observe_passes(1);
      return terminated(sel, ledger);
    }
  }
  ledger.observe_passes(1);
  return sel.to_solution(ledger);
}

Solution sketch_all(SetStream& stream, std::size_t k, const SketchAllOptions& options) {
  if (!(options.eps > 0.0)) throw DomainError("eps must be positive");
  const std::size_t m = stream.total_sets();
  const std::size_t r = std::min(k, m);
  const std::uint64_t candidates = binomial(m, r);
  if (candidates > options.limits.max_candidates) {
    throw OracleTooLarge("sketch_all would enumerate " + std::to_string(candidates) +
                         " subsets (cap " + std::to_string(options.limits.max_candidates) + ")");
  }

  // Failure probability 1/(n m^k) per sketch; ln(1/delta) = ln n + k ln m.
  F0Config cfg;
  cfg.seed = options.seed;
  cfg.capacity = options.capacity != 0
                     ? options.capacity
                     : std::max<std::size_t>(
                           2, static_cast<std::size_t>(std::ceil(4.0 / (options.eps * options.eps))));
  const double n = static_cast<double>(std::max<std::uint64_t>(stream.universe_size(), 2));
  const double log_inv_delta =
      std::log(n) + static_cast<double>(k) * std::log(static_cast<double>(std::max<std::size_t>(m, 2)));
  cfg.repetitions = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(log_inv_delta)), 1,
                                            std::max<std::size_t>(options.max_repetitions, 1));

  SpaceLedger ledger;
  const F0Sketch prototype(cfg);
  std::vector<std::pair<SetId, F0Sketch>> sketches;
  std::size_t registers = 0;
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    F0Sketch sk = prototype;
    sk.insert_all(rec->elements);
    registers += sk.registers();
    sketches.emplace_back(rec->set_id, std::move(sk));
    ledger.observe_registers(registers);
    ledger.observe_set_ids(sketches.size());
  }
  ledger.observe_passes(1);
  std::sort(sketches.begin(), sketches.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<F0Sketch> prefix(r + 1, prototype);
  std::vector<std::size_t> pick(r);
  std::vector<std::size_t> best_pick;
  double best = -1.0;
  auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == r) {
      const double value = prefix[r].estimate();
      if (value > best) {
        best = value;
        best_pick = pick;
      }
      return;
    }
    for (std::size_t i = start; i + (r - depth) <= m; ++i) {
      pick[depth] = i;
      prefix[depth + 1] = prefix[depth];
      prefix[depth + 1].merge_in(sketches[i].second);
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);

  Solution sol;
  for (std::size_t i : best_pick) sol.chosen_ids.push_back(sketches[i].first);
  sol.estimated_coverage = std::max(best, 0.0);
  sol.ledger = ledger;
  // Reporting only: a forked stream keeps this run's pass count at one.
  SetStream report = stream.fork();
  sol.exact_coverage = recompute_coverage(report, sol.chosen_ids);
  return sol;
}

Solution group_single_pass(SetStream& stream, std::span<const std::size_t> quotas, double z,
                           InstanceHooks* hooks) {
  require_positive_z(z, "group_single_pass");
  const std::size_t groups = quotas.size();
  std::vector<double> thresholds(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    thresholds[g] = z / (static_cast<double>(groups + 1) * static_cast<double>(quotas[g]));
  }
  std::vector<std::size_t> used(groups, 0);
  SpaceLedger ledger;
  Selection sel;
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    check_groups(*rec, groups);
    const std::size_t g = rec->group;
    if (used[g] >= quotas[g]) continue;
    const std::size_t gain = count_residual(*rec, sel.covered);
    if (static_cast<double>(gain) < thresholds[g]) continue;
    sel.admit(*rec, gain);
    ++used[g];
    if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
    ledger.observe_elements(sel.covered.size());
    ledger.observe_set_ids(sel.chosen.size());
    ledger.observe_registers(hook_registers(hooks));
    if (over_cap(hooks, sel.covered.size())) {
      ledger.observe_passes(1);
      return terminated(sel, ledger);
    }
  }
  ledger.observe_passes(1);
  return sel.to_solution(ledger);
}

std::size_t group_multi_pass_budget(std::span<const std::size_t> quotas, double eps) {
  require_eps(eps);
  std::size_t k = 0;
  for (auto q : quotas) k += q;
  if (k == 0) return 0;
  return std::max<std::size_t>(
      1, ceil_tolerant(log_base(10.0 * static_cast<double>(k) / eps, 1.0 + eps)));
}

Solution group_multi_pass(SetStream& stream, std::span<const std::size_t> quotas, double z,
                          double eps, InstanceHooks* hooks) {
  require_positive_z(z, "group_multi_pass");
  const std::size_t passes = group_multi_pass_budget(quotas, eps);
  const std::size_t groups = quotas.size();
  std::size_t capacity = 0;
  for (auto q : quotas) capacity += q;
  std::vector<std::size_t> used(groups, 0);
  SpaceLedger ledger;
  Selection sel;
  double threshold = z;
  for (std::size_t j = 1; j <= passes && sel.chosen.size() < capacity; ++j) {
    threshold /= 1.0 + eps;
    auto cursor = stream.replay();
    ledger.observe_passes(j);
    while (const SetRecord* rec = cursor.next()) {
      check_groups(*rec, groups);
      const std::size_t g = rec->group;
      if (used[g] >= quotas[g]) continue;
      const std::size_t gain = count_residual(*rec, sel.covered);
      if (static_cast<double>(gain) < threshold) continue;
      sel.admit(*rec, gain);
      ++used[g];
      if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
      ledger.observe_elements(sel.covered.size());
      ledger.observe_set_ids(sel.chosen.size());
      ledger.observe_registers(hook_registers(hooks));
      if (over_cap(hooks, sel.covered.size())) return terminated(sel, ledger);
    }
  }
  return sel.to_solution(ledger);
}

Solution budgeted_single_pass(SetStream& stream, double budget, double z, InstanceHooks* hooks) {
  require_positive_z(z, "budgeted_single_pass");
  if (!(budget >= 0.0)) throw DomainError("budget must be non-negative");
  const double slack = 1e-9 * std::max(1.0, budget);
  SpaceLedger ledger;
  Selection sel;
  double spent = 0.0;
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    if (rec->cost < 0.0 || rec->cost > budget + slack) {
      throw FormatError("set " + std::to_string(rec->set_id) + " has cost outside [0, L]");
    }
    const double share = budget > 0.0 ? rec->cost / budget : 0.0;
    const std::size_t gain = count_residual(*rec, sel.covered);
    if (gain == 0 || static_cast<double>(gain) < (2.0 * z / 3.0) * share) continue;
    if (spent + rec->cost > budget + slack) {
      // Early stop: keep I when |C| >= |S|, otherwise return S alone.
      ledger.observe_passes(1);
      if (sel.covered.size() >= rec->elements.size()) return sel.to_solution(ledger);
      Selection alone;
      alone.admit(*rec, rec->elements.size());
      ledger.observe_elements(rec->elements.size());
      return alone.to_solution(ledger);
    }
    sel.admit(*rec, gain);
    spent += rec->cost;
    if (hooks != nullptr) hooks->on_admit(*rec, cursor.original());
    ledger.observe_elements(sel.covered.size());
    ledger.observe_set_ids(sel.chosen.size());
    if (over_cap(hooks, sel.covered.size())) {
      ledger.observe_passes(1);
      return terminated(sel, ledger);
    }
  }
  ledger.observe_passes(1);
  return sel.to_solution(ledger);
}

std::size_t recompute_coverage(SetStream& stream, std::span<const SetId> ids) {
  std::unordered_set<SetId> wanted(ids.begin(), ids.end());
  CoveredSet covered;
  auto cursor = stream.replay();
  while (const SetRecord* rec = cursor.next()) {
    if (wanted.count(rec->set_id) != 0) covered.insert(rec->elements.begin(), rec->elements.end());
  }
  return covered.size();
}

}  // namespace maxcov
