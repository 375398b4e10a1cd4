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
#include <span>
#include <vector>

#include "maxcov/distinct.hpp"
#include "maxcov/offline.hpp"
#include "maxcov/setstream.hpp"

namespace maxcov {

// Observer for a running algorithm instance. The guessing framework uses it to
// sketch original (unsubsampled) coverage and to stop instances whose covered
// count grows past their cap. `seen` is the record as delivered to the
// algorithm, `original` the unfiltered record at the same stream position.
class InstanceHooks {
 public:
  virtual ~InstanceHooks() = default;

  virtual void on_admit(const SetRecord& /*seen*/, const SetRecord& /*original*/) {}
  // The algorithm stored a nonempty residual of this set for post-processing.
  virtual void on_defer(const SetRecord& /*seen*/, const SetRecord& /*original*/) {}
  // A deferred set was picked after the stream ended.
  virtual void on_post_pick(SetId /*id*/) {}
  // Called after every change to the covered set; true stops the run.
  virtual bool exceeds_cap(std::size_t /*covered*/) const { return false; }
  // Sketch registers currently held by the hooks, for the space ledger.
  virtual std::size_t registers() const { return 0; }
};

// Admit S when |S \ C| >= z/k and |I| < k, otherwise keep S \ C for a greedy
// post-processing step. With OPT <= z <= 4*OPT the result is a (1 - 1/e)
// approximation. k = 1 keeps only the largest set seen.
Solution single_pass_threshold(SetStream& stream, std::size_t k, double z,
                               InstanceHooks* hooks = nullptr);

// Threshold raised to b*z/k; leftovers are completed exhaustively.
// With OPT <= z <= 4*OPT the result is within 1 - 1/(4b) of OPT.
Solution boosted_single_pass(SetStream& stream, std::size_t k, double z, double b,
                             const OracleLimits& limits = {}, InstanceHooks* hooks = nullptr);

// Pass budget 1 + ceil(log_{1+eps}(4e)).
std::size_t multi_pass_budget(double eps);
// Pass j admits sets with |S \ C| >= z / (k (1+eps)^(j-1)). Stops once k sets are chosen.
Solution multi_pass_threshold(SetStream& stream, std::size_t k, double z, double eps,
                              InstanceHooks* hooks = nullptr);

// One pass, admit on |S \ C| >= z/(2k), nothing else stored.
Solution half_single_pass(SetStream& stream, std::size_t k, double z,
                          InstanceHooks* hooks = nullptr);

struct SketchAllOptions {
  double eps = 0.1;
  std::uint64_t seed = 0;
  // Overrides the capacity derived from eps when non-zero.
  std::size_t capacity = 0;
  std::size_t max_repetitions = 64;
  OracleLimits limits;
};

// Sketch every set in one pass, then pick the k-subset whose merged sketch
// estimates the largest union (ties: smallest ID list). exact_coverage is
// computed on a forked stream so the run itself still reports one pass.
Solution sketch_all(SetStream& stream, std::size_t k, const SketchAllOptions& options);

// Group-cardinality single pass: a set of group g is admitted when
// |S \ C| >= z / ((l+1) k_g) and fewer than k_g sets of its group are chosen.
Solution group_single_pass(SetStream& stream, std::span<const std::size_t> quotas, double z,
                           InstanceHooks* hooks = nullptr);

// Pass budget ceil(log_{1+eps}(10 k / eps)) with k = sum of quotas.
std::size_t group_multi_pass_budget(std::span<const std::size_t> quotas, double eps);
// Pass j admits |S \ C| >= z / (1+eps)^j subject to the group quotas.
Solution group_multi_pass(SetStream& stream, std::span<const std::size_t> quotas, double z,
                          double eps, InstanceHooks* hooks = nullptr);

// Budgeted single pass. A set passing |S \ C| >= (2z/3)(w_S / L) is admitted
// unless it would push the cost past L; then the run stops and returns the
// current solution or that set alone, whichever has the larger |C| vs |S|.
Solution budgeted_single_pass(SetStream& stream, double budget, double z,
                              InstanceHooks* hooks = nullptr);

// Union size of the chosen sets, using one pass over `stream`.
std::size_t recompute_coverage(SetStream& stream, std::span<const SetId> ids);

}  // namespace maxcov
