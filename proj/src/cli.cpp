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

#include "maxcov/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "maxcov/errors.hpp"
#include "maxcov/hashing.hpp"
#include "maxcov/streamalgs.hpp"
#include "maxcov/vertexcover.hpp"

namespace maxcov::cli {

namespace {

constexpr std::uint64_t kGenTag = 0x6E9E7AULL;

std::vector<ElementId> draw_subset(std::uint64_t n, std::size_t size, std::mt19937_64& rng) {
  size = static_cast<std::size_t>(std::min<std::uint64_t>(size, n));
  std::vector<ElementId> out;
  if (size == 0) return out;
  if (2 * static_cast<std::uint64_t>(size) >= n) {
    std::vector<ElementId> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), ElementId{0});
    std::sample(all.begin(), all.end(), std::back_inserter(out), size, rng);
    return out;
  }
  std::uniform_int_distribution<ElementId> pick(0, n - 1);
  std::unordered_set<ElementId> seen;
  while (seen.size() < size) seen.insert(pick(rng));
  out.assign(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t draw_size(std::size_t max_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(1, std::max<std::size_t>(max_size, 1));
  return dist(rng);
}

enum class Family { plain, budgeted, grouped, graph };

Family family_of(const std::string& algorithm) {
  if (algorithm == "budgeted") return Family::budgeted;
  if (algorithm == "group-single" || algorithm == "group-multi") return Family::grouped;
  if (algorithm == "near-regular" || algorithm == "sparsify-exhaustive" ||
      algorithm == "sparsify-greedy") {
    return Family::graph;
  }
  return Family::plain;
}

void check_family(const Dataset& data, const RunConfig& config) {
  const auto known = known_algorithms();
  if (std::find(known.begin(), known.end(), config.algorithm) == known.end()) {
    throw UsageError("unknown algorithm '" + config.algorithm + "'");
  }
  const Family family = family_of(config.algorithm);
  if (family == Family::graph) {
    if (!data.is_graph) throw UsageError(config.algorithm + " needs a .gstream dataset");
    return;
  }
  if (data.is_graph) throw UsageError(config.algorithm + " needs a set-stream dataset");
  const StreamKind kind = data.stream.kind();
  if (family == Family::budgeted) {
    if (kind != StreamKind::budgeted) throw UsageError("budgeted needs a .bset dataset");
    if (!config.budget) throw UsageError("budgeted needs --budget");
  } else if (family == Family::grouped) {
    if (kind != StreamKind::grouped) throw UsageError(config.algorithm + " needs a .gset dataset");
    if (config.quotas.empty()) throw UsageError(config.algorithm + " needs --quotas");
  } else if (kind != StreamKind::plain) {
    throw UsageError(config.algorithm + " needs a plain .sets dataset");
  }
}

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

std::string fmt_ms(double ms) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << ms;
  return out.str();
}

std::string join_ids(const std::vector<std::uint64_t>& ids, char sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != 0) out += sep;
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::uint64_t graph_node_bound(const std::vector<EdgeUpdate>& updates) {
  std::uint64_t bound = 0;
  for (const auto& u : updates) {
    for (NodeId v : u.nodes) bound = std::max<std::uint64_t>(bound, v + 1);
  }
  return bound;
}

Solution run_with_z(const Dataset& data, const RunConfig& config, double z) {
  SetStream stream = data.stream.fork();
  const std::string& a = config.algorithm;
  const double b = config.b > 0.0 ? config.b : 4.0 / config.eps;
  if (a == "single-pass") return single_pass_threshold(stream, config.k, z);
  if (a == "boosted") return boosted_single_pass(stream, config.k, z, b, config.limits);
  if (a == "multi-pass") return multi_pass_threshold(stream, config.k, z, config.eps);
  if (a == "half") return half_single_pass(stream, config.k, z);
  if (a == "group-single") return group_single_pass(stream, config.quotas, z);
  if (a == "group-multi") return group_multi_pass(stream, config.quotas, z, config.eps);
  if (a == "budgeted") return budgeted_single_pass(stream, *config.budget, z);
  throw InvariantViolation("no oracle-z form for " + a);
}

WrappedAlgorithm wrapped(const std::string& a) {
  if (a == "single-pass") return WrappedAlgorithm::single_pass;
  if (a == "boosted") return WrappedAlgorithm::boosted;
  if (a == "multi-pass") return WrappedAlgorithm::multi_pass;
  if (a == "half") return WrappedAlgorithm::half;
  if (a == "group-single") return WrappedAlgorithm::group_single;
  return WrappedAlgorithm::group_multi;
}

}  // namespace

std::vector<SetRecord> random_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, kGenTag, 1));
  std::vector<SetRecord> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].set_id = i;
    out[i].elements = draw_subset(n, draw_size(max_size, rng), rng);
  }
  return out;
}

std::vector<SetRecord> planted_cover(std::uint64_t n, std::size_t m, std::size_t k,
                                     double decoy_fraction, std::uint64_t seed) {
  if (k == 0 || k > m || k > n) throw UsageError("planted-cover needs 1 <= k <= min(m, n)");
  if (!(decoy_fraction > 0.0)) throw UsageError("decoy fraction must be positive");
  std::mt19937_64 rng(derive_seed(seed, kGenTag, 2));
  std::vector<ElementId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), ElementId{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<SetRecord> records;
  records.reserve(m);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t part = static_cast<std::size_t>(n / k + (i < n % k ? 1 : 0));
    SetRecord rec;
    rec.elements.assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                        perm.begin() + static_cast<std::ptrdiff_t>(offset + part));
    std::sort(rec.elements.begin(), rec.elements.end());
    offset += part;
    records.push_back(std::move(rec));
  }
  const auto decoy_max = static_cast<std::size_t>(
      std::max(1.0, std::floor(decoy_fraction * static_cast<double>(n) / static_cast<double>(k))));
  for (std::size_t i = k; i < m; ++i) {
    SetRecord rec;
    rec.elements = draw_subset(n, draw_size(decoy_max, rng), rng);
    records.push_back(std::move(rec));
  }
  std::shuffle(records.begin(), records.end(), rng);
  std::vector<SetId> ids(m);
  std::iota(ids.begin(), ids.end(), SetId{0});
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < m; ++i) records[i].set_id = ids[i];
  return records;
}

std::vector<SetRecord> budgeted_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                     double max_cost, std::uint64_t seed) {
  if (!(max_cost > 0.0)) throw UsageError("budgeted generator needs a positive cost bound");
  std::mt19937_64 rng(derive_seed(seed, kGenTag, 3));
  std::uniform_real_distribution<double> cost(0.05 * max_cost, max_cost);
  std::vector<SetRecord> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].set_id = i;
    out[i].elements = draw_subset(n, draw_size(max_size, rng), rng);
    out[i].cost = std::round(cost(rng) * 100.0) / 100.0;
  }
  return out;
}

std::vector<SetRecord> grouped_sets(std::uint64_t n, std::size_t m, std::size_t max_size,
                                    std::size_t groups, std::uint64_t seed) {
  if (groups == 0) throw UsageError("grouped generator needs at least one group");
  std::mt19937_64 rng(derive_seed(seed, kGenTag, 4));
  std::uniform_int_distribution<std::size_t> group(0, groups - 1);
  std::vector<SetRecord> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i].set_id = i;
    out[i].elements = draw_subset(n, draw_size(max_size, rng), rng);
    out[i].group = group(rng);
  }
  return out;
}

std::vector<EdgeUpdate> regular_graph(std::size_t nodes, std::size_t degree, std::uint64_t seed) {
  if (degree == 0 || degree >= nodes || (nodes * degree) % 2 != 0) {
    throw UsageError("regular-graph needs 0 < d < N and N*d even");
  }
  std::mt19937_64 rng(derive_seed(seed, kGenTag, 5));
  std::vector<NodeId> stubs;
  for (std::size_t v = 0; v < nodes; ++v) stubs.insert(stubs.end(), degree, v);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<EdgeUpdate> edges;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      NodeId u = std::min(stubs[i], stubs[i + 1]);
      NodeId v = std::max(stubs[i], stubs[i + 1]);
      ok = u != v && seen.emplace(u, v).second;
      edges.push_back({EdgeUpdate::Sign::insert, {u, v}});
    }
    if (ok) return edges;
  }
  throw UsageError("could not draw a simple regular graph; try another seed");
}

Dataset Dataset::load(const std::filesystem::path& path) {
  Dataset data;
  data.path = path;
  if (path.extension() == ".gstream") {
    data.is_graph = true;
    data.updates = read_graph_stream_file(path);
  } else {
    data.stream = read_set_stream_file(path);
  }
  return data;
}

std::vector<std::string> known_algorithms() {
  return {"single-pass",  "boosted",     "multi-pass", "half",         "sketch-all",
          "group-single", "group-multi", "budgeted",   "greedy",       "brute-force",
          "near-regular", "sparsify-exhaustive",       "sparsify-greedy"};
}

OracleValue compute_oracle(const Dataset& data, const RunConfig& config) {
  OracleValue out;
  try {
    switch (family_of(config.algorithm)) {
      case Family::graph:
        out.opt = brute_force_vertex(materialize_graph(data.updates), config.k, config.limits).exact_coverage;
        break;
      case Family::budgeted: {
        SetStream s = data.stream.fork();
        out.opt = brute_force_budgeted(SetSystem::collect(s), *config.budget, config.limits).exact_coverage;
        break;
      }
      case Family::grouped: {
        SetStream s = data.stream.fork();
        out.opt = brute_force_group(SetSystem::collect(s), config.quotas, config.limits).exact_coverage;
        break;
      }
      case Family::plain: {
        SetStream s = data.stream.fork();
        out.opt = brute_force_opt(SetSystem::collect(s), config.k, config.limits).exact_coverage;
        break;
      }
    }
  } catch (const OracleTooLarge& e) {
    if (config.require_oracle) throw;
    out.note = std::string("oracle skipped: ") + e.what();
  }
  return out;
}

RunReport run_algorithm(const Dataset& data, const RunConfig& config, const OracleValue* oracle) {
  check_family(data, config);
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
  const auto start = std::chrono::steady_clock::now();

  RunReport report;
  report.algorithm = config.algorithm;
  report.dataset = data.path.filename().string();
  report.k = config.k;
  if (family_of(config.algorithm) == Family::grouped) {
    report.k = std::accumulate(config.quotas.begin(), config.quotas.end(), std::size_t{0});
  }
  report.eps = config.eps;
  report.seed = config.seed;

  OracleValue local;
  if (oracle == nullptr) {
    local = compute_oracle(data, config);
    oracle = &local;
  }
  report.opt = oracle->opt;
  std::vector<std::string> notes;
  if (!oracle->note.empty()) notes.push_back(oracle->note);

  const std::string& a = config.algorithm;
  Solution sol;
  if (family_of(a) == Family::graph) {
    const Hypergraph graph = materialize_graph(data.updates);
    if (a == "near-regular") {
      NearRegularOptions opts;
      opts.trials = config.trials;
      opts.seed = config.seed;
      opts.limits = config.limits;
      auto result = near_regular_sample_stream(data.updates, graph_node_bound(data.updates), config.k,
                                               config.eps, opts);
      sol = std::move(result.solution);
      report.z_mode = "trials:" + std::to_string(result.trials);
      if (result.used_fallback) notes.emplace_back("small graph: solved on a sparsifier");
    } else {
      SparsifiedSolveOptions opts;
      opts.strategy = a == "sparsify-exhaustive" ? CoverStrategy::exhaustive : CoverStrategy::greedy;
      opts.seed = config.seed;
      opts.limits = config.limits;
      sol = solve_on_sparsifier(graph, config.k, config.eps, opts);
      report.z_mode = "none";
    }
  } else if (a == "sketch-all") {
    SketchAllOptions opts;
    opts.eps = config.eps;
    opts.seed = config.seed;
    opts.limits = config.limits;
    SetStream s = data.stream.fork();
    sol = sketch_all(s, config.k, opts);
    report.z_mode = "none";
  } else if (a == "greedy" || a == "brute-force") {
    SetStream s = data.stream.fork();
    const SetSystem system = SetSystem::collect(s);
    sol = a == "greedy" ? greedy_opt(system, config.k) : brute_force_opt(system, config.k, config.limits);
    sol.ledger.passes = 1;
    report.z_mode = "none";
  } else {
    bool done = false;
    if (config.oracle_z) {
      if (oracle->opt) {
        const double z = static_cast<double>(*oracle->opt);
        report.z_mode = "oracle:" + fmt(z);
        if (z > 0.0) sol = run_with_z(data, config, z);
        done = true;
      } else if (config.require_oracle) {
        throw OracleTooLarge("--oracle-z needs the exact optimum");
      } else {
        notes.emplace_back("oracle-z unavailable, used guessing");
      }
    }
    if (!done && a == "budgeted") {
      sol = budgeted_guessing(data.stream, *config.budget, config.eps);
      report.z_mode = "guesses";
    } else if (!done) {
      FrameworkOptions opts;
      opts.eps = config.eps;
      opts.ladder = config.ladder.value_or(default_ladder(wrapped(a)));
      opts.lambda_c = config.lambda_c;
      opts.seed = config.seed;
      opts.boost = config.b;
      opts.quotas = config.quotas;
      opts.threads = config.threads;
      opts.limits = config.limits;
      report.z_mode = "ladder:" + std::string(to_string(opts.ladder));
      if (data.stream.universe_size() > 0) {
        sol = run_guessing(data.stream, config.k, wrapped(a), opts);
      }
    }
  }

  report.chosen_ids = sol.chosen_ids;
  report.exact_coverage = sol.exact_coverage;
  report.estimated_coverage = sol.estimated_coverage;
  report.ledger = sol.ledger;
  if (report.opt) {
    report.ratio = *report.opt == 0 ? 1.0
                                    : static_cast<double>(report.exact_coverage) /
                                          static_cast<double>(*report.opt);
  }
  for (std::size_t i = 0; i < notes.size(); ++i) report.note += (i ? "; " : "") + notes[i];
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string csv_header() {
  return "schema_version,algorithm,dataset,k,eps,seed,z_mode,chosen_ids,exact_coverage,"
         "estimated_coverage,opt,ratio,element_slots,set_id_slots,sketch_registers,passes,note,"
         "wall_time_ms";
}

std::string csv_row(const RunReport& r) {
  std::ostringstream out;
  out << kCsvSchemaVersion << ',' << csv_escape(r.algorithm) << ',' << csv_escape(r.dataset) << ','
      << r.k << ',' << fmt(r.eps) << ',' << r.seed << ',' << csv_escape(r.z_mode) << ','
      << join_ids(r.chosen_ids, ';') << ',' << r.exact_coverage << ','
      << (r.estimated_coverage ? fmt(*r.estimated_coverage) : "") << ','
      << (r.opt ? std::to_string(*r.opt) : "") << ',' << (r.ratio ? fmt(*r.ratio) : "") << ','
      << r.ledger.element_slots << ',' << r.ledger.set_id_slots << ','
      << r.ledger.sketch_registers << ',' << r.ledger.passes << ',' << csv_escape(r.note) << ','
      << fmt_ms(r.wall_time_ms);
  return out.str();
}

std::string format_report(const RunReport& r) {
  std::ostringstream out;
  out << "algorithm:          " << r.algorithm << '\n'
      << "dataset:            " << r.dataset << '\n'
      << "k:                  " << r.k << '\n'
      << "eps:                " << fmt(r.eps) << '\n'
      << "seed:               " << r.seed << '\n'
      << "z:                  " << r.z_mode << '\n'
      << "chosen:             " << join_ids(r.chosen_ids, ' ') << '\n'
      << "exact_coverage:     " << r.exact_coverage << '\n'
      << "estimated_coverage: " << (r.estimated_coverage ? fmt(*r.estimated_coverage) : "-") << '\n'
      << "opt:                " << (r.opt ? std::to_string(*r.opt) : "-") << '\n'
      << "ratio:              " << (r.ratio ? fmt(*r.ratio) : "-") << '\n'
      << "element_slots:      " << r.ledger.element_slots << '\n'
      << "set_id_slots:       " << r.ledger.set_id_slots << '\n'
      << "sketch_registers:   " << r.ledger.sketch_registers << '\n'
      << "passes:             " << r.ledger.passes << '\n';
  if (!r.note.empty()) out << "note:               " << r.note << '\n';
  out << "wall_time_ms:       " << fmt_ms(r.wall_time_ms) << '\n';
  return out.str();
}

std::string format_table(const std::vector<RunReport>& reports) {
  std::ostringstream out;
  out << std::left << std::setw(20) << "algorithm" << std::right << std::setw(10) << "exact"
      << std::setw(16) << "estimate" << std::setw(10) << "opt" << std::setw(14) << "ratio"
      << std::setw(10) << "elements" << std::setw(8) << "ids" << std::setw(10) << "registers"
      << std::setw(8) << "passes" << std::setw(14) << "wall_time_ms" << '\n';
  for (const auto& r : reports) {
    out << std::left << std::setw(20) << r.algorithm << std::right << std::setw(10)
        << r.exact_coverage << std::setw(16)
        << (r.estimated_coverage ? fmt(*r.estimated_coverage) : "-") << std::setw(10)
        << (r.opt ? std::to_string(*r.opt) : "-") << std::setw(14) << (r.ratio ? fmt(*r.ratio) : "-")
        << std::setw(10) << r.ledger.element_slots << std::setw(8) << r.ledger.set_id_slots
        << std::setw(10) << r.ledger.sketch_registers << std::setw(8) << r.ledger.passes
        << std::setw(14) << fmt_ms(r.wall_time_ms) << '\n';
  }
  return out.str();
}

std::vector<std::size_t> parse_quotas(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad quota list '" + text + "'");
    }
    out.push_back(static_cast<std::size_t>(std::stoull(part)));
  }
  return out;
}

}  // namespace maxcov::cli
