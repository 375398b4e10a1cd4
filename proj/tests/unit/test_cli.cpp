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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "maxcov/cli.hpp"
#include "maxcov/errors.hpp"
#include "maxcov/vertexcover.hpp"

using namespace maxcov;
using namespace maxcov::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "maxcov_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path toy_a() { return write_file("toy_a.sets", "1 1 2 3 4\n2 5 6 7 8\n3 1 2 5 6\n4 3 4 7 8\n"); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MAXCOV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Drops the wall-time column (last) from every CSV line.
std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST_CASE("generators are deterministic") {
  CHECK(random_sets(500, 40, 50, 3) == random_sets(500, 40, 50, 3));
  CHECK(random_sets(500, 40, 50, 3) != random_sets(500, 40, 50, 4));
  CHECK(budgeted_sets(300, 20, 30, 2.0, 1) == budgeted_sets(300, 20, 30, 2.0, 1));
  CHECK(grouped_sets(300, 20, 30, 3, 1) == grouped_sets(300, 20, 30, 3, 1));
  CHECK(regular_graph(20, 3, 9) == regular_graph(20, 3, 9));
}

TEST_CASE("planted cover partitions the universe") {
  auto recs = planted_cover(1000, 50, 5, 0.3, 7);
  REQUIRE(recs.size() == 50);
  std::set<SetId> ids;
  std::vector<const SetRecord*> big;
  for (const auto& r : recs) {
    ids.insert(r.set_id);
    if (r.elements.size() > 60) big.push_back(&r);
    else CHECK(r.elements.size() <= 60);
  }
  CHECK(ids.size() == 50);
  REQUIRE(big.size() == 5);
  std::vector<ElementId> all;
  for (const auto* r : big) all.insert(all.end(), r->elements.begin(), r->elements.end());
  std::sort(all.begin(), all.end());
  CHECK(all.size() == 1000);
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(all.back() == 999);
}

TEST_CASE("budgeted and grouped generators respect their ranges") {
  for (const auto& r : budgeted_sets(300, 30, 20, 4.0, 2)) {
    CHECK(r.cost >= 0.2 - 1e-9);
    CHECK(r.cost <= 4.0 + 1e-9);
  }
  for (const auto& r : grouped_sets(300, 30, 20, 4, 2)) CHECK(r.group < 4);
}

TEST_CASE("regular graph") {
  auto ups = regular_graph(100, 3, 5);
  CHECK(ups.size() == 150);
  Hypergraph g = materialize_graph(ups);
  CHECK(g.edges.size() == 150);
  DegreeStats d = degree_stats(g);
  CHECK(d.min_degree == 3);
  CHECK(d.max_degree == 3);
  CHECK_THROWS(regular_graph(5, 3, 1));
}

TEST_CASE("quota parsing") {
  CHECK(parse_quotas("1,2,3") == std::vector<std::size_t>{1, 2, 3});
  CHECK_THROWS_AS(parse_quotas("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_quotas("x"), UsageError);
}

TEST_CASE("oracle-z run on toy-A reaches ratio 1") {
  Dataset d = Dataset::load(toy_a());
  RunConfig c;
  c.algorithm = "single-pass";
  c.k = 2;
  c.oracle_z = true;
  OracleValue o = compute_oracle(d, c);
  REQUIRE(o.opt);
  CHECK(*o.opt == 8);
  RunReport r = run_algorithm(d, c, &o);
  CHECK(r.exact_coverage == 8);
  REQUIRE(r.ratio);
  CHECK(*r.ratio == 1.0);
  CHECK(r.z_mode == "oracle:8");
  CHECK(r.ledger.passes == 1);
}

TEST_CASE("every set algorithm runs on toy-A") {
  Dataset d = Dataset::load(toy_a());
  for (const std::string algo : {"single-pass", "boosted", "multi-pass", "half", "sketch-all",
                                 "greedy", "brute-force"}) {
    CAPTURE(algo);
    RunConfig c;
    c.algorithm = algo;
    c.k = 2;
    OracleValue o = compute_oracle(d, c);
    RunReport r = run_algorithm(d, c, &o);
    CHECK(r.exact_coverage <= 8);
    CHECK(r.exact_coverage >= 4);
    CHECK(r.chosen_ids.size() <= 2);
  }
}

TEST_CASE("report formats are reproducible") {
  Dataset d = Dataset::load(toy_a());
  RunConfig c;
  c.algorithm = "half";
  RunReport a = run_algorithm(d, c);
  RunReport b = run_algorithm(d, c);
  a.wall_time_ms = b.wall_time_ms = 0.0;
  CHECK(csv_row(a) == csv_row(b));
  CHECK(format_report(a) == format_report(b));
  const std::string header = csv_header();
  CHECK(header.find("schema_version") != std::string::npos);
  CHECK(header.substr(header.rfind(',') + 1) == "wall_time_ms");
  const std::string row = csv_row(a);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  const std::string text = format_report(a);
  CHECK(text.find("wall") > text.find("coverage"));
  CHECK(format_table({a, b}).find("half") != std::string::npos);
}

TEST_CASE("family mismatches and unknown algorithms are usage errors") {
  Dataset d = Dataset::load(toy_a());
  RunConfig c;
  c.algorithm = "near-regular";
  CHECK_THROWS_AS(run_algorithm(d, c), UsageError);
  c.algorithm = "no-such-algo";
  CHECK_THROWS_AS(run_algorithm(d, c), UsageError);
  c.algorithm = "budgeted";
  CHECK_THROWS_AS(run_algorithm(d, c), UsageError);
}

TEST_CASE("graph dataset") {
  fs::path p = scratch_dir() / "ring.gstream";
  std::vector<EdgeUpdate> ups;
  for (NodeId v = 0; v < 10; ++v) ups.push_back({EdgeUpdate::Sign::insert, {std::min(v, (v + 1) % 10), std::max(v, (v + 1) % 10)}});
  write_file("ring.gstream", format_graph_stream(ups));
  Dataset d = Dataset::load(p);
  CHECK(d.is_graph);
  RunConfig c;
  c.algorithm = "sparsify-exhaustive";
  c.k = 3;
  OracleValue o = compute_oracle(d, c);
  REQUIRE(o.opt);
  CHECK(*o.opt == 6);
  RunReport r = run_algorithm(d, c, &o);
  CHECK(r.exact_coverage <= 6);
}

TEST_CASE("empty dataset") {
  Dataset d = Dataset::load(write_file("empty.sets", ""));
  RunConfig c;
  c.algorithm = "greedy";
  RunReport r = run_algorithm(d, c);
  CHECK(r.exact_coverage == 0);
  CHECK(r.chosen_ids.empty());
}

TEST_CASE("exit codes of the tool") {
  const std::string toy = toy_a().string();
  CHECK(run_cli("run " + toy + " --algo greedy --k 2") == kExitOk);
  CHECK(run_cli("run " + toy + " --algo nope") == kExitUsage);
  CHECK(run_cli("run " + toy + " --k") == kExitUsage);
  CHECK(run_cli("run " + toy + " --eps 1.5") == kExitUsage);
  CHECK(run_cli("frobnicate") == kExitUsage);
  const std::string bad = write_file("bad.sets", "1 2 x\n").string();
  CHECK(run_cli("run " + bad + " --algo greedy") == kExitFormat);
  CHECK(run_cli("run " + (scratch_dir() / "missing.sets").string() + " --algo greedy") != kExitOk);
  const std::string big = scratch_dir().string() + "/big.sets";
  REQUIRE(run_cli("gen random-sets --n 200 --m 60 --max-size 20 --seed 1 -o " + big) == kExitOk);
  CHECK(run_cli("run " + big + " --algo greedy --k 20 --require-oracle") == kExitOracle);
  CHECK(run_cli("run " + big + " --algo greedy --k 20") == kExitOk);
}

TEST_CASE("CSV output is byte reproducible apart from timing") {
  const fs::path data = scratch_dir() / "planted.sets";
  REQUIRE(run_cli("gen planted-cover --n 2000 --m 40 --k 4 --seed 3 -o " + data.string()) == kExitOk);
  const fs::path a = scratch_dir() / "a.csv", b = scratch_dir() / "b.csv";
  const std::string args = "compare " + data.string() + " --algos single-pass,half,greedy --k 4 --seed 11 --csv ";
  REQUIRE(run_cli(args + a.string()) == kExitOk);
  REQUIRE(run_cli(args + b.string()) == kExitOk);
  const std::string ca = read_file(a);
  CHECK(std::count(ca.begin(), ca.end(), '\n') == 4);
  CHECK(strip_timing(ca) == strip_timing(read_file(b)));
}
