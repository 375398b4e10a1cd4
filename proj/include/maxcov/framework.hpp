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
#include <span>
#include <string_view>
#include <vector>

#include "maxcov/hashing.hpp"
#include "maxcov/offline.hpp"
#include "maxcov/setstream.hpp"

namespace maxcov {

enum class LadderKind { pow2, fine };

std::string_view to_string(LadderKind kind);

// Candidate values for OPT: 1, 2, 4, ... <= n, or powers of (1 + eps/4) <= n.
struct GuessLadder {
  LadderKind kind = LadderKind::pow2;
  std::vector<double> values;

  static GuessLadder build(LadderKind kind, std::uint64_t n, double eps);
  // Keeps only guesses in [lo, hi].
  GuessLadder restricted(double lo, double hi) const;
};

enum class WrappedAlgorithm { single_pass, boosted, multi_pass, half, group_single, group_multi };

std::string_view to_string(WrappedAlgorithm algorithm);
// Ladder the algorithm's guarantee is stated for: fine for half and group_single.
LadderKind default_ladder(WrappedAlgorithm algorithm);

struct FrameworkOptions {
  double eps = 0.3;
  LadderKind ladder = LadderKind::pow2;
  double lambda_c = 1.0;
  std::uint64_t seed = 42;
  double boost = 0.0;                // b for the boosted algorithm; 0 means 4/eps
  std::vector<std::size_t> quotas;   // group algorithms; k is their sum
  bool largest_set_prepass = false;  // one extra pass narrows the ladder to [s/2, k s]
  std::size_t threads = 1;
  std::size_t max_hash_degree = 4096;
  OracleLimits limits;
};

// lambda = c * eps^-2 * k * max(1, ln m).
double framework_lambda(std::size_t k, std::size_t m, double eps, double c);

// Keeps elements the subsampler accepts. Membership is memoized per view.
SetStream subsampled_view(const SetStream& stream, const Subsampler& subsampler);

struct InstanceReport {
  double guess = 0.0;
  double probability = 1.0;
  double cap = 0.0;  // also the z handed to the wrapped algorithm
  bool terminated = false;
  double estimate = 0.0;  // F0 estimate of the original coverage
  Solution solution;      // chosen IDs and the ledger on the subsampled stream
};

struct GuessingRun {
  Solution best;
  std::vector<InstanceReport> instances;
  std::size_t selected = 0;  // index into instances; meaningless when instances is empty
  double lambda = 0.0;
};

GuessingRun run_guessing_detailed(const SetStream& stream, std::size_t k,
                                  WrappedAlgorithm algorithm, const FrameworkOptions& options);

// Best live instance by estimated original coverage (ties: smaller guess).
// exact_coverage is recomputed on a fork of `stream`.
Solution run_guessing(const SetStream& stream, std::size_t k, WrappedAlgorithm algorithm,
                      const FrameworkOptions& options);

// Budgeted variant: z runs over powers of (1 + eps) up to n on the original
// stream; the solution with the largest coverage wins (ties: smaller z).
Solution budgeted_guessing(const SetStream& stream, double budget, double eps);

}  // namespace maxcov
