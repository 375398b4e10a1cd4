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

#include "maxcov/framework.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <thread>
#include <unordered_map>

#include "maxcov/distinct.hpp"
#include "maxcov/errors.hpp"
#include "maxcov/streamalgs.hpp"

namespace maxcov {

namespace {

constexpr std::uint64_t kHashTag = 0x5AB5A3ULL;
constexpr std::uint64_t kSketchTag = 0xC0FE5CULL;

// Sketches the original coverage of one instance and enforces its cap.
class SketchingHooks final : public InstanceHooks {
 public:
  SketchingHooks(const F0Config& config, double cap) : config_(config), covered_(config), cap_(cap) {}

  void on_admit(const SetRecord& /*seen*/, const SetRecord& original) override {
    const std::size_t before = covered_.registers();
    covered_.insert_all(original.elements);
    registers_ += covered_.registers() - before;
  }

  void on_defer(const SetRecord& seen, const SetRecord& original) override {
    F0Sketch sk(config_);
    sk.insert_all(original.elements);
    registers_ += sk.registers();
    auto [it, inserted] = deferred_.try_emplace(seen.set_id, sk);
    if (!inserted) {
      registers_ -= it->second.registers();
      it->second = std::move(sk);
    }
  }

  void on_post_pick(SetId id) override {
    auto it = deferred_.find(id);
    if (it == deferred_.end()) return;
    covered_.merge_in(it->second);
  }

  bool exceeds_cap(std::size_t covered) const override {
    return static_cast<double>(covered) > cap_;
  }

  std::size_t registers() const override { return registers_; }

  double estimate() const { return covered_.estimate(); }

 private:
  F0Config config_;
  F0Sketch covered_;
  std::unordered_map<SetId, F0Sketch> deferred_;
  double cap_;
  std::size_t registers_ = 0;
};

std::size_t ceil_log2(std::uint64_t n) {
  std::size_t bits = 0;
  while ((std::uint64_t{1} << bits) < n && bits < 63) ++bits;
  return bits;
}

F0Config coverage_sketch_config(std::uint64_t n, double eps, std::uint64_t seed) {
  const double nn = static_cast<double>(std::max<std::uint64_t>(n, 2));
  const double delta = std::min(0.5, 1.0 / (nn * static_cast<double>(std::max<std::size_t>(ceil_log2(n), 1))));
  return F0Config::for_accuracy(eps, delta, seed);
}

Solution dispatch(SetStream& view, std::size_t k, WrappedAlgorithm algorithm, double z,
                  const FrameworkOptions& options, InstanceHooks* hooks) {
  switch (algorithm) {
    case WrappedAlgorithm::single_pass:
      return single_pass_threshold(view, k, z, hooks);
    case WrappedAlgorithm::boosted: {
      const double b = options.boost > 0.0 ? options.boost : 4.0 / options.eps;
      return boosted_single_pass(view, k, z, b, options.limits, hooks);
    }
    case WrappedAlgorithm::multi_pass:
      return multi_pass_threshold(view, k, z, options.eps, hooks);
    case WrappedAlgorithm::half:
      return half_single_pass(view, k, z, hooks);
    case WrappedAlgorithm::group_single:
      return group_single_pass(view, options.quotas, z, hooks);
    case WrappedAlgorithm::group_multi:
      return group_multi_pass(view, options.quotas, z, options.eps, hooks);
  }
  throw InvariantViolation("unknown wrapped algorithm");
}

bool is_group(WrappedAlgorithm algorithm) {
  return algorithm == WrappedAlgorithm::group_single || algorithm == WrappedAlgorithm::group_multi;
}

std::size_t largest_set_size(const SetStream& stream) {
  SetStream pass = stream.fork();
  std::size_t s = 0;
  auto cursor = pass.replay();
  while (const SetRecord* rec = cursor.next()) s = std::max(s, rec->elements.size());
  return s;
}

template <typename Fn>
void run_parallel(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view to_string(LadderKind kind) {
  return kind == LadderKind::pow2 ? "pow2" : "fine";
}

GuessLadder GuessLadder::build(LadderKind kind, std::uint64_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  GuessLadder ladder;
  ladder.kind = kind;
  const double limit = static_cast<double>(n);
  const double step = kind == LadderKind::pow2 ? 2.0 : 1.0 + eps / 4.0;
  for (double v = 1.0; v <= limit; v *= step) ladder.values.push_back(v);
  return ladder;
}

GuessLadder GuessLadder::restricted(double lo, double hi) const {
  GuessLadder out;
  out.kind = kind;
  for (double v : values) {
    if (v >= lo && v <= hi) out.values.push_back(v);
  }
  return out;
}

std::string_view to_string(WrappedAlgorithm algorithm) {
  switch (algorithm) {
    case WrappedAlgorithm::single_pass: return "single-pass";
    case WrappedAlgorithm::boosted: return "boosted";
    case WrappedAlgorithm::multi_pass: return "multi-pass";
    case WrappedAlgorithm::half: return "half";
    case WrappedAlgorithm::group_single: return "group-single";
    case WrappedAlgorithm::group_multi: return "group-multi";
  }
  return "unknown";
}

LadderKind default_ladder(WrappedAlgorithm algorithm) {
  return algorithm == WrappedAlgorithm::half || algorithm == WrappedAlgorithm::group_single
             ? LadderKind::fine
             : LadderKind::pow2;
}

double framework_lambda(std::size_t k, std::size_t m, double eps, double c) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  const double log_m = std::max(1.0, std::log(static_cast<double>(std::max<std::size_t>(m, 1))));
  return c * static_cast<double>(k) * log_m / (eps * eps);
}

SetStream subsampled_view(const SetStream& stream, const Subsampler& subsampler) {
  if (subsampler.is_identity()) return stream.fork();
  struct Memo {
    Subsampler sampler;
    std::vector<std::int8_t> state;  // -1 unknown, 0 out, 1 in
  };
  auto memo = std::make_shared<Memo>(Memo{subsampler, {}});
  memo->state.assign(static_cast<std::size_t>(stream.universe_size()), -1);
  return stream.filtered([memo](ElementId e) {
    if (e >= memo->state.size()) return memo->sampler.member(e);
    std::int8_t& s = memo->state[static_cast<std::size_t>(e)];
    if (s < 0) s = memo->sampler.member(e) ? 1 : 0;
    return s == 1;
  });
}

GuessingRun run_guessing_detailed(const SetStream& stream, std::size_t k,
                                  WrappedAlgorithm algorithm, const FrameworkOptions& options) {
  if (!(options.eps > 0.0 && options.eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  if (is_group(algorithm)) {
    if (options.quotas.empty()) throw DomainError("group algorithms need quotas");
    k = 0;
    for (auto q : options.quotas) k += q;
  }
  if (k < 1) throw DomainError("k must be at least 1");

  GuessingRun run;
  const std::uint64_t n = stream.universe_size();
  const bool fine = options.ladder == LadderKind::fine;
  const double lambda = framework_lambda(k, stream.total_sets(), options.eps, options.lambda_c) *
                        (fine ? 16.0 : 1.0);
  const double factor = fine ? std::pow(1.0 + options.eps / 4.0, 2.0) : 2.0 * (1.0 + options.eps);
  run.lambda = lambda;

  GuessLadder ladder = GuessLadder::build(options.ladder, n, options.eps);
  std::size_t extra_passes = 0;
  if (options.largest_set_prepass) {
    const double s = static_cast<double>(largest_set_size(stream));
    const double low = fine ? s / (1.0 + options.eps / 4.0) : s / 2.0;
    ladder = ladder.restricted(low, static_cast<double>(k) * s);
    extra_passes = 1;
  }
  if (ladder.values.empty()) {
    run.best.ledger.passes = extra_passes;
    return run;
  }

  const std::size_t degree = independence_degree(lambda, options.max_hash_degree);
  run.instances.resize(ladder.values.size());
  run_parallel(ladder.values.size(), options.threads, [&](std::size_t i) {
    InstanceReport& rep = run.instances[i];
    rep.guess = ladder.values[i];
    rep.probability = std::min(1.0, lambda / rep.guess);
    rep.cap = factor * rep.probability * rep.guess;
    SetStream view = rep.probability >= 1.0
                         ? stream.fork()
                         : subsampled_view(stream, Subsampler(PolyHash::build(degree, n, derive_seed(options.seed, kHashTag, i)),
                                                              rep.probability));
    SketchingHooks hooks(coverage_sketch_config(n, options.eps, derive_seed(options.seed, kSketchTag, i)),
                         rep.cap);
    rep.solution = dispatch(view, k, algorithm, rep.cap, options, &hooks);
    rep.terminated = rep.solution.terminated;
    rep.estimate = hooks.estimate();
  });

  bool found = false;
  SpaceLedger total;
  for (std::size_t i = 0; i < run.instances.size(); ++i) {
    const InstanceReport& rep = run.instances[i];
    total.passes = std::max(total.passes, rep.solution.ledger.passes);
    if (rep.terminated) continue;
    total.element_slots += rep.solution.ledger.element_slots;
    total.set_id_slots += rep.solution.ledger.set_id_slots;
    total.sketch_registers += rep.solution.ledger.sketch_registers;
    if (!found || rep.estimate > run.instances[run.selected].estimate) {
      run.selected = i;
      found = true;
    }
  }
  if (!found) throw InvariantViolation("every guess instance exceeded its coverage cap");
  total.passes += extra_passes;

  const InstanceReport& chosen = run.instances[run.selected];
  run.best.chosen_ids = chosen.solution.chosen_ids;
  run.best.estimated_coverage = chosen.estimate;
  run.best.trace = chosen.solution.trace;
  run.best.ledger = total;
  SetStream report = stream.fork();
  run.best.exact_coverage = recompute_coverage(report, run.best.chosen_ids);
  return run;
}

Solution run_guessing(const SetStream& stream, std::size_t k, WrappedAlgorithm algorithm,
                      const FrameworkOptions& options) {
  return run_guessing_detailed(stream, k, algorithm, options).best;
}

Solution budgeted_guessing(const SetStream& stream, double budget, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  Solution best;
  best.ledger.passes = 0;
  bool found = false;
  SpaceLedger total;
  const double n = static_cast<double>(stream.universe_size());
  for (double z = 1.0; z <= n; z *= 1.0 + eps) {
    SetStream pass = stream.fork();
    Solution sol = budgeted_single_pass(pass, budget, z);
    total.element_slots += sol.ledger.element_slots;
    total.set_id_slots += sol.ledger.set_id_slots;
    total.passes = std::max(total.passes, sol.ledger.passes);
    if (!found || sol.exact_coverage > best.exact_coverage) {
      best = std::move(sol);
      found = true;
    }
  }
  best.ledger = total;
  return best;
}

}  // namespace maxcov
