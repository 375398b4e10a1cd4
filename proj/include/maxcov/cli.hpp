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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxcov/framework.hpp"
#include "maxcov/offline.hpp"
#include "maxcov/setstream.hpp"

namespace maxcov::cli {

// Exit codes of the maxcov tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitOracle = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Synthetic datasets. Every generator is a pure function of its parameters.

std::vector<SetRecord> random_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                   std::uint64_t seed);

// k disjoint sets partition [0, n); m - k decoys of size at most decoy_fraction * n / k.
// Record order and set IDs are shuffled.
std::vector<SetRecord> planted_cover(std::uint64_t n, std::size_t m, std::size_t k,
                                     double decoy_fraction, std::uint64_t seed);

// Costs uniform in [0.05 max_cost, max_cost], two decimals.
std::vector<SetRecord> budgeted_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                     double max_cost, std::uint64_t seed);

std::vector<SetRecord> grouped_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                    std::size_t groups, std::uint64_t seed);

// Simple d-regular graph by the configuration model with restarts.
std::vector<EdgeUpdate> regular_graph(std::size_t nodes, std::size_t degree, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Runs.

struct RunConfig {
  std::string algorithm = "single-pass";
  std::size_t k = 2;
  double eps = 0.3;
  std::uint64_t seed = 42;
  bool oracle_z = false;
  bool require_oracle = false;
  std::optional<LadderKind> ladder;  // unset: the algorithm's default
  double lambda_c = 1.0;
  double b = 0.0;  // 0: 4/eps
  std::optional<double> budget;
  std::vector<std::size_t> quotas;
  std::size_t trials = 0;
  std::size_t threads = 1;
  OracleLimits limits;
};

struct RunReport {
  std::string algorithm;
  std::string dataset;
  std::size_t k = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string z_mode;  // "oracle:<z>", "ladder:pow2", "ladder:fine", "guesses", "none"
  std::vector<std::uint64_t> chosen_ids;
  std::size_t exact_coverage = 0;
  std::optional<double> estimated_coverage;
  std::optional<std::size_t> opt;
  std::optional<double> ratio;
  SpaceLedger ledger;
  std::string note;
  double wall_time_ms = 0.0;
};

// Optimum for the dataset's family, or nullopt when the enumeration cap is hit.
struct OracleValue {
  std::optional<std::size_t> opt;
  std::string note;
};

// Set-system and graph datasets loaded once and shared by several runs.
struct Dataset {
  std::filesystem::path path;
  bool is_graph = false;
  SetStream stream;
  std::vector<EdgeUpdate> updates;

  static Dataset load(const std::filesystem::path& path);
};

std::vector<std::string> known_algorithms();

OracleValue compute_oracle(const Dataset& data, const RunConfig& config);
RunReport run_algorithm(const Dataset& data, const RunConfig& config,
                        const OracleValue* oracle = nullptr);

inline constexpr int kCsvSchemaVersion = 1;
std::string csv_header();
std::string csv_row(const RunReport& report);
// Human-readable block; the wall-time line comes last.
std::string format_report(const RunReport& report);
std::string format_table(const std::vector<RunReport>& reports);

std::vector<std::size_t> parse_quotas(const std::string& text);

}  // namespace maxcov::cli
