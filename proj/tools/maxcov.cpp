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

// maxcov: generate datasets, run streaming coverage algorithms, compare them.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "maxcov/cli.hpp"
#include "maxcov/errors.hpp"

namespace {

using namespace maxcov;
using namespace maxcov::cli;

struct GenArgs {
  std::string kind;
  std::string output;
  std::uint64_t n = 1000;
  std::size_t m = 100;
  std::size_t k = 5;
  std::size_t max_size = 0;  // 0: n / 10
  double decoy_fraction = 0.5;
  double max_cost = 1.0;
  std::size_t groups = 2;
  std::size_t nodes = 100;
  std::size_t degree = 3;
  std::uint64_t seed = 42;
};

struct RunArgs {
  std::string dataset;
  std::string algos;
  std::string ladder;
  std::string quotas;
  std::string csv;
  std::optional<double> budget;
  RunConfig config;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int do_gen(const GenArgs& g) {
  const std::size_t max_size =
      g.max_size != 0 ? g.max_size : static_cast<std::size_t>(std::max<std::uint64_t>(g.n / 10, 1));
  std::string text;
  if (g.kind == "random-sets") {
    text = format_set_stream(random_sets(g.n, g.m, max_size, g.seed), StreamKind::plain, g.n);
  } else if (g.kind == "planted-cover") {
    text = format_set_stream(planted_cover(g.n, g.m, g.k, g.decoy_fraction, g.seed),
                             StreamKind::plain, g.n);
  } else if (g.kind == "budgeted") {
    text = format_set_stream(budgeted_sets(g.n, g.m, max_size, g.max_cost, g.seed),
                             StreamKind::budgeted, g.n);
  } else if (g.kind == "grouped") {
    text = format_set_stream(grouped_sets(g.n, g.m, max_size, g.groups, g.seed),
                             StreamKind::grouped, g.n);
  } else if (g.kind == "regular-graph") {
    text = format_graph_stream(regular_graph(g.nodes, g.degree, g.seed));
  } else {
    throw UsageError("unknown dataset kind '" + g.kind + "'");
  }
  write_output(g.output, text);
  return kExitOk;
}

RunConfig finish_config(RunArgs& r) {
  RunConfig c = r.config;
  if (!r.ladder.empty()) {
    if (r.ladder == "pow2") {
      c.ladder = LadderKind::pow2;
    } else if (r.ladder == "fine") {
      c.ladder = LadderKind::fine;
    } else {
      throw UsageError("--ladder must be pow2 or fine");
    }
  }
  if (!r.quotas.empty()) c.quotas = parse_quotas(r.quotas);
  c.budget = r.budget;
  c.limits = OracleLimits::from_env();
  return c;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int do_run(RunArgs& r, bool compare) {
  RunConfig base = finish_config(r);
  const Dataset data = Dataset::load(r.dataset);
  std::vector<std::string> algos = compare ? split_list(r.algos) : std::vector<std::string>{base.algorithm};
  if (algos.empty()) throw UsageError("compare needs at least one algorithm in --algos");

  std::vector<RunReport> reports;
  // One oracle per family: algorithms of the same family share the OPT column.
  std::vector<std::pair<std::string, OracleValue>> oracles;
  for (const auto& name : algos) {
    RunConfig cfg = base;
    cfg.algorithm = name;
    const bool graph = name == "near-regular" || name.rfind("sparsify-", 0) == 0;
    const std::string family = graph ? "graph"
                               : name == "budgeted" ? "budgeted"
                               : name.rfind("group-", 0) == 0 ? "grouped"
                                                              : "plain";
    auto it = std::find_if(oracles.begin(), oracles.end(),
                           [&](const auto& p) { return p.first == family; });
    const OracleValue* oracle = nullptr;
    if (it != oracles.end()) oracle = &it->second;
    reports.push_back(run_algorithm(data, cfg, oracle));
    if (it == oracles.end()) {
      OracleValue v;
      v.opt = reports.back().opt;
      if (!v.opt) v.note = reports.back().note.substr(0, reports.back().note.find(';'));
      oracles.emplace_back(family, v);
    }
  }

  if (compare) {
    std::cout << format_table(reports);
  } else {
    std::cout << format_report(reports.front());
  }
  if (!r.csv.empty()) {
    std::ofstream out(r.csv, std::ios::binary);
    if (!out) throw UsageError("cannot write " + r.csv);
    out << csv_header() << '\n';
    for (const auto& rep : reports) out << csv_row(rep) << '\n';
  }
  return kExitOk;
}

void add_run_options(CLI::App* cmd, RunArgs& r) {
  cmd->add_option("dataset", r.dataset, "Dataset file (.sets, .bset, .gset, .gstream)")->required();
  cmd->add_option("--k", r.config.k, "Number of sets or nodes to choose");
  cmd->add_option("--eps", r.config.eps, "Accuracy parameter in (0, 1)");
  cmd->add_option("--seed", r.config.seed, "Master seed");
  cmd->add_flag("--oracle-z", r.config.oracle_z, "Run with z set to the brute-force optimum");
  cmd->add_flag("--require-oracle", r.config.require_oracle, "Fail (exit 4) when the oracle is too large");
  cmd->add_option("--ladder", r.ladder, "Guess ladder: pow2 or fine");
  cmd->add_option("--lambda-c", r.config.lambda_c, "Constant c in lambda");
  cmd->add_option("--b", r.config.b, "Boost factor for the boosted algorithm (default 4/eps)");
  cmd->add_option("--budget", r.budget, "Budget L for budgeted datasets");
  cmd->add_option("--quotas", r.quotas, "Comma-separated group quotas");
  cmd->add_option("--trials", r.config.trials, "Samples for near-regular (default ceil(7 ln N))");
  cmd->add_option("--threads", r.config.threads, "Worker threads for guess instances");
  cmd->add_option("--csv", r.csv, "Write a CSV report to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming maximum coverage toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("kind", gen.kind, "random-sets | planted-cover | regular-graph | budgeted | grouped")
      ->required();
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");
  gen_cmd->add_option("--n", gen.n, "Universe size");
  gen_cmd->add_option("--m", gen.m, "Number of sets");
  gen_cmd->add_option("--k", gen.k, "Planted sets");
  gen_cmd->add_option("--max-size", gen.max_size, "Largest random set (default n/10)");
  gen_cmd->add_option("--decoy-frac", gen.decoy_fraction, "Decoy size bound as a fraction of n/k");
  gen_cmd->add_option("--max-cost", gen.max_cost, "Largest set cost");
  gen_cmd->add_option("--groups", gen.groups, "Number of groups");
  gen_cmd->add_option("--nodes", gen.nodes, "Graph nodes");
  gen_cmd->add_option("--degree", gen.degree, "Graph degree");
  gen_cmd->add_option("--seed", gen.seed, "Seed");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one algorithm on a dataset");
  add_run_options(run_cmd, run);
  run_cmd->add_option("--algo", run.config.algorithm, "Algorithm name");

  RunArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Run several algorithms on one dataset");
  add_run_options(cmp_cmd, cmp);
  cmp_cmd->add_option("--algos", cmp.algos, "Comma-separated algorithm names")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return do_gen(gen);
    if (*run_cmd) return do_run(run, false);
    return do_run(cmp, true);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const StreamConsistencyError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const OracleTooLarge& e) {
    std::cerr << "oracle too large: " << e.what() << '\n';
    return kExitOracle;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
