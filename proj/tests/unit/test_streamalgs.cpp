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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_set>

#include "maxcov/errors.hpp"
#include "maxcov/streamalgs.hpp"

using namespace maxcov;

namespace {

const double kOneMinusInvE = 1.0 - std::exp(-1.0);

SetStream toy_a() {
  return SetStream({{1, {1, 2, 3, 4}}, {2, {5, 6, 7, 8}}, {3, {1, 2, 5, 6}}, {4, {3, 4, 7, 8}}});
}

std::vector<SetRecord> random_records(std::mt19937_64& rng, std::size_t m, std::uint64_t n,
                                      std::size_t groups = 1) {
  std::vector<SetRecord> recs;
  std::uniform_int_distribution<std::size_t> size(1, n / 3);
  for (SetId id = 0; id < m; ++id) {
    SetRecord r{id, {}, 0.0, groups > 1 ? static_cast<std::size_t>(rng() % groups) : 0};
    std::vector<ElementId> all(n);
    std::iota(all.begin(), all.end(), ElementId{0});
    std::sample(all.begin(), all.end(), std::back_inserter(r.elements), size(rng), rng);
    recs.push_back(r);
  }
  return recs;
}

std::size_t oracle(const std::vector<SetRecord>& recs, std::size_t k) {
  SetStream s(recs);
  return brute_force_opt(SetSystem::collect(s), k).exact_coverage;
}

// Checks that the reported coverage equals the union of the chosen sets.
void check_consistent(const std::vector<SetRecord>& recs, const Solution& sol) {
  std::unordered_set<ElementId> u;
  std::unordered_set<SetId> ids(sol.chosen_ids.begin(), sol.chosen_ids.end());
  CHECK(ids.size() == sol.chosen_ids.size());
  for (const auto& r : recs) {
    if (ids.count(r.set_id)) u.insert(r.elements.begin(), r.elements.end());
  }
  CHECK(u.size() == sol.exact_coverage);
}

// Records every deferred set so the leftover bound can be checked.
struct DeferWatcher : InstanceHooks {
  std::vector<std::size_t> deferred_sizes;
  std::unordered_set<ElementId> covered;
  double threshold = 0.0;
  bool bound_ok = true;
  void on_admit(const SetRecord& seen, const SetRecord&) override {
    covered.insert(seen.elements.begin(), seen.elements.end());
  }
  void on_defer(const SetRecord& seen, const SetRecord&) override {
    std::size_t residual = 0;
    for (auto e : seen.elements) residual += covered.count(e) == 0 ? 1 : 0;
    if (!(static_cast<double>(residual) < threshold)) bound_ok = false;
  }
};

}  // namespace

TEST_CASE("single pass on toy-A") {
  SetStream s = toy_a();
  Solution sol = single_pass_threshold(s, 2, 8.0);
  CHECK(sol.chosen_ids == std::vector<SetId>{1, 2});
  CHECK(sol.exact_coverage == 8);
  CHECK(sol.ledger.passes == 1);
  CHECK(s.passes_consumed() == 1);
}

TEST_CASE("single pass with an unreachable threshold falls back to greedy over leftovers") {
  SetStream s = toy_a();
  Solution sol = single_pass_threshold(s, 2, 1000.0);
  CHECK(sol.exact_coverage == 8);
  CHECK(sol.ledger.element_slots == 16);  // every set stored as a leftover
  CHECK(sol.ledger.set_id_slots == 4);
}

TEST_CASE("single pass degenerate inputs") {
  SetStream empty;
  CHECK(single_pass_threshold(empty, 3, 5.0).exact_coverage == 0);
  SetStream s = toy_a();
  Solution neg = single_pass_threshold(s, 2, -1.0);
  CHECK(neg.exact_coverage == 8);  // z <= 0 sends everything to the leftovers
  SetStream s1 = toy_a();
  Solution k1 = single_pass_threshold(s1, 1, 4.0);
  CHECK(k1.chosen_ids == std::vector<SetId>{1});
  CHECK(k1.exact_coverage == 4);
}

TEST_CASE("boosted single pass") {
  SetStream s = toy_a();
  Solution sol = boosted_single_pass(s, 2, 8.0, 2.0);
  CHECK(sol.exact_coverage == 8);
  std::vector<SetId> ids = sol.chosen_ids;
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<SetId>{1, 2});

  SetStream one({{5, {1, 2, 3}}});
  for (double b : {1.0, 3.0, 50.0}) {
    SetStream copy = one.fork();
    CHECK(boosted_single_pass(copy, 1, 3.0, b).chosen_ids == std::vector<SetId>{5});
  }
  SetStream bad = toy_a();
  CHECK_THROWS_AS(boosted_single_pass(bad, 2, 8.0, 0.5), DomainError);
}

TEST_CASE("boosted with b = 1 is at least the greedy-post-processed variant") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    auto recs = random_records(rng, 10, 30);
    const double z = static_cast<double>(oracle(recs, 3));
    SetStream a(recs), b(recs);
    CHECK(boosted_single_pass(a, 3, z, 1.0).exact_coverage >=
          single_pass_threshold(b, 3, z).exact_coverage);
  }
}

TEST_CASE("multi pass budget formula") {
  CHECK(multi_pass_budget(0.5) == 7);
  CHECK(multi_pass_budget(0.1) == 1 + static_cast<std::size_t>(std::ceil(std::log(4 * std::numbers::e) / std::log(1.1))));
  CHECK_THROWS_AS(multi_pass_budget(1.0), DomainError);
}

TEST_CASE("multi pass on toy-A uses one pass") {
  SetStream s = toy_a();
  Solution sol = multi_pass_threshold(s, 2, 8.0, 0.1);
  CHECK(sol.exact_coverage == 8);
  CHECK(sol.ledger.passes == 1);
  CHECK(s.passes_consumed() == 1);
}

TEST_CASE("multi pass with k = m covers the whole union") {
  std::mt19937_64 rng(5);
  auto recs = random_records(rng, 6, 20);
  SetStream s(recs);
  Solution sol = multi_pass_threshold(s, 6, static_cast<double>(oracle(recs, 6)), 0.2);
  CHECK(sol.exact_coverage == oracle(recs, 6));
  CHECK(sol.ledger.passes == s.passes_consumed());
}

TEST_CASE("half single pass") {
  SetStream s = toy_a();
  CHECK(half_single_pass(s, 2, 8.0).exact_coverage == 8);
  SetStream same({{1, {1, 2}}, {2, {1, 2}}});
  CHECK(half_single_pass(same, 2, 2.0).chosen_ids == std::vector<SetId>{1});
  SetStream small = toy_a();
  Solution low = half_single_pass(small, 2, 0.5);
  CHECK(low.chosen_ids == std::vector<SetId>{1, 2});  // first k sets with any new element
}

TEST_CASE("sketch all") {
  SketchAllOptions opt;
  opt.eps = 0.1;
  SetStream s = toy_a();
  Solution sol = sketch_all(s, 2, opt);
  CHECK(sol.chosen_ids == std::vector<SetId>{1, 2});
  CHECK(sol.estimated_coverage == doctest::Approx(8.0));
  CHECK(sol.exact_coverage == 8);
  CHECK(s.passes_consumed() == 1);

  SetStream k1 = toy_a();
  CHECK(sketch_all(k1, 1, opt).chosen_ids == std::vector<SetId>{1});
  SetStream two({{3, {1}}, {9, {2}}});
  CHECK(sketch_all(two, 2, opt).chosen_ids == std::vector<SetId>{3, 9});

  OracleLimits tight{2};
  opt.limits = tight;
  SetStream capped = toy_a();
  CHECK_THROWS_AS(sketch_all(capped, 2, opt), OracleTooLarge);
}

TEST_CASE("group single pass") {
  SetStream s({{1, {1, 2}, 0, 0}, {2, {2, 3}, 0, 1}, {3, {4}, 0, 1}}, StreamKind::grouped);
  std::vector<std::size_t> q = {1, 1};
  Solution sol = group_single_pass(s, q, 4.0);
  CHECK(sol.chosen_ids == std::vector<SetId>{1});
  CHECK(sol.exact_coverage == 2);
  SetStream bad({{1, {1}, 0, 3}}, StreamKind::grouped);
  CHECK_THROWS_AS(group_single_pass(bad, q, 4.0), FormatError);
  SetStream empty({}, StreamKind::grouped);
  CHECK(group_single_pass(empty, q, 4.0).chosen_ids.empty());
}

TEST_CASE("group single pass with one group matches the half rule") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    auto recs = random_records(rng, 10, 30);
    std::vector<std::size_t> q = {3};
    SetStream a(recs), b(recs);
    const double z = static_cast<double>(oracle(recs, 3));
    CHECK(group_single_pass(a, q, z).chosen_ids == half_single_pass(b, 3, z).chosen_ids);
  }
}

TEST_CASE("group multi pass budget") {
  std::vector<std::size_t> q = {1, 1};
  CHECK(group_multi_pass_budget(q, 0.5) == 10);
}

TEST_CASE("group algorithms respect quotas") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto recs = random_records(rng, 12, 30, 3);
    std::vector<std::size_t> q = {1, 2, 1};
    SetStream a(recs, StreamKind::grouped), b(recs, StreamKind::grouped);
    for (const Solution& sol : {group_single_pass(a, q, 20.0), group_multi_pass(b, q, 20.0, 0.3)}) {
      std::vector<std::size_t> used(3, 0);
      for (SetId id : sol.chosen_ids) ++used[recs[id].group];
      for (std::size_t g = 0; g < 3; ++g) CHECK(used[g] <= q[g]);
      check_consistent(recs, sol);
    }
    CHECK(b.passes_consumed() <= group_multi_pass_budget(q, 0.3));
  }
}

TEST_CASE("group multi pass with large quotas picks every useful set") {
  std::mt19937_64 rng(19);
  auto recs = random_records(rng, 5, 15, 2);
  std::vector<std::size_t> q = {5, 5};
  SetStream s(recs, StreamKind::grouped);
  Solution sol = group_multi_pass(s, q, 1.0, 0.3);
  CHECK(sol.exact_coverage == oracle(recs, 5));
}

TEST_CASE("budgeted single pass early stop") {
  SetStream s({{1, {1, 2, 3}, 2.0, 0}, {2, {4}, 1.0, 0}}, StreamKind::budgeted);
  Solution sol = budgeted_single_pass(s, 2.0, 3.0);
  CHECK(sol.chosen_ids == std::vector<SetId>{1});
  CHECK(sol.exact_coverage == 3);
}

TEST_CASE("budgeted: a later large set replaces the solution") {
  SetStream s({{1, {1}, 1.0, 0}, {2, {2, 3, 4, 5}, 1.0, 0}}, StreamKind::budgeted);
  Solution sol = budgeted_single_pass(s, 1.0, 1.4);
  CHECK(sol.chosen_ids == std::vector<SetId>{2});
  CHECK(sol.exact_coverage == 4);
}

TEST_CASE("budgeted zero-cost and full-cost sets") {
  SetStream zero({{1, {1}, 0.0, 0}, {2, {2}, 0.0, 0}, {3, {1}, 0.0, 0}}, StreamKind::budgeted);
  Solution z = budgeted_single_pass(zero, 1.0, 100.0);
  CHECK(z.chosen_ids == std::vector<SetId>{1, 2});
  SetStream full({{1, {1, 2, 3}, 2.0, 0}}, StreamKind::budgeted);
  CHECK(budgeted_single_pass(full, 2.0, 3.0).exact_coverage == 3);
  SetStream bad({{1, {1}, 3.0, 0}}, StreamKind::budgeted);
  CHECK_THROWS_AS(budgeted_single_pass(bad, 2.0, 3.0), FormatError);
}

TEST_CASE("leftover residuals stay below the threshold") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    auto recs = random_records(rng, 15, 40);
    const double z = static_cast<double>(oracle(recs, 3));
    DeferWatcher w;
    w.threshold = z / 3.0;
    SetStream s(recs);
    single_pass_threshold(s, 3, z, &w);
    CHECK(w.bound_ok);
    DeferWatcher wb;
    wb.threshold = 2.0 * z / 3.0;
    SetStream sb(recs);
    boosted_single_pass(sb, 3, z, 2.0, {}, &wb);
    CHECK(wb.bound_ok);
  }
}

TEST_CASE("trace bookkeeping and the per-pick lower bound for multi pass") {
  std::mt19937_64 rng(29);
  const double eps = 0.2;
  for (int t = 0; t < 60; ++t) {
    auto recs = random_records(rng, 12, 36);
    const std::size_t k = 3;
    const std::size_t opt = oracle(recs, k);
    for (double z : {static_cast<double>(opt), 2.5 * opt, 4.0 * opt}) {
      SetStream s(recs);
      Solution sol = multi_pass_threshold(s, k, z, eps);
      double c = static_cast<double>(opt);
      std::size_t b = 0;
      for (const PickStep& step : sol.trace) {
        CHECK(static_cast<double>(step.gain) >= c / ((1.0 + eps) * k) - 1e-9);
        b += step.gain;
        CHECK(step.covered_after == b);
        c -= static_cast<double>(step.gain);
      }
      CHECK(sol.ledger.passes <= multi_pass_budget(eps));
      CHECK(sol.ledger.passes == s.passes_consumed());
    }
  }
}

TEST_CASE("guarantees with z from the exact optimum") {
  std::mt19937_64 rng(31);
  const double eps = 0.25;
  for (int t = 0; t < 60; ++t) {
    auto recs = random_records(rng, 10, 30);
    const std::size_t k = 1 + t % 4;
    const double opt = static_cast<double>(oracle(recs, k));
    for (double z : {opt, 4.0 * opt}) {
      SetStream a(recs), b(recs), c(recs);
      Solution sp = single_pass_threshold(a, k, z);
      CHECK(static_cast<double>(sp.exact_coverage) >= kOneMinusInvE * opt);
      check_consistent(recs, sp);
      CHECK(static_cast<double>(multi_pass_threshold(b, k, z, eps).exact_coverage) >=
            (kOneMinusInvE - eps) * opt);
      CHECK(static_cast<double>(boosted_single_pass(c, k, z, 4.0 / eps).exact_coverage) >=
            (1.0 - eps) * opt);
    }
    SetStream h(recs);
    CHECK(static_cast<double>(half_single_pass(h, k, opt * (1.0 + eps)).exact_coverage) >=
          (1.0 - eps) / 2.0 * opt);
  }
}

TEST_CASE("single-pass algorithms consume exactly one pass") {
  std::mt19937_64 rng(37);
  auto recs = random_records(rng, 10, 30);
  SetStream a(recs), b(recs), c(recs);
  CHECK(single_pass_threshold(a, 3, 10.0).ledger.passes == 1);
  CHECK(boosted_single_pass(b, 3, 10.0, 2.0).ledger.passes == 1);
  CHECK(half_single_pass(c, 3, 10.0).ledger.passes == 1);
  CHECK(a.passes_consumed() == 1);
  CHECK(b.passes_consumed() == 1);
  CHECK(c.passes_consumed() == 1);
}

TEST_CASE("recompute coverage") {
  SetStream s = toy_a();
  std::vector<SetId> ids = {3, 4};
  CHECK(recompute_coverage(s, ids) == 8);
  std::vector<SetId> none;
  CHECK(recompute_coverage(s, none) == 0);
}
