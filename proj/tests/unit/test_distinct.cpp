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

#include <algorithm>
#include <random>
#include <sstream>

#include "maxcov/distinct.hpp"
#include "maxcov/errors.hpp"

using namespace maxcov;

namespace {

F0Config small_config(std::size_t t, std::size_t reps = 3, std::uint64_t seed = 9) {
  F0Config c;
  c.capacity = t;
  c.repetitions = reps;
  c.seed = seed;
  return c;
}

std::vector<ElementId> random_set(std::mt19937_64& rng, std::size_t size, std::uint64_t range) {
  std::vector<ElementId> out;
  std::uniform_int_distribution<ElementId> d(0, range - 1);
  for (std::size_t i = 0; i < size; ++i) out.push_back(d(rng));
  return out;
}

}  // namespace

TEST_CASE("config for accuracy") {
  F0Config c = F0Config::for_accuracy(0.1, 0.05, 1);
  CHECK(c.capacity == 400);
  CHECK(c.repetitions == 3);
  CHECK(F0Config::for_accuracy(0.5, 1e-300, 1).repetitions == 64);
  CHECK_THROWS_AS(F0Config::for_accuracy(0.0, 0.1, 1), DomainError);
  CHECK_THROWS_AS(F0Config::for_accuracy(0.1, 1.0, 1), DomainError);
  CHECK_THROWS_AS(F0Sketch(small_config(1)), DomainError);
}

TEST_CASE("insert is idempotent") {
  F0Sketch a(small_config(8));
  a.insert(5);
  F0Sketch b = a;
  a.insert(5);
  CHECK(a == b);
}

TEST_CASE("exact below capacity") {
  F0Sketch s(small_config(16));
  CHECK(s.estimate() == 0.0);
  for (ElementId e = 1; e <= 9; ++e) s.insert(e);
  CHECK(s.estimate() == 9.0);
  for (std::size_t r = 0; r < 3; ++r) CHECK(s.min_values(r).size() == 9);
}

TEST_CASE("capacity bounds the stored values") {
  F0Sketch s(small_config(2, 1));
  s.insert(1);
  s.insert(2);
  s.insert(3);
  CHECK(s.min_values(0).size() == 2);
  CHECK(std::is_sorted(s.min_values(0).begin(), s.min_values(0).end()));
}

TEST_CASE("merge of {1,2,3} and {3,4} is exactly 4") {
  F0Sketch a(small_config(8)), b(small_config(8));
  a.insert_all(std::vector<ElementId>{1, 2, 3});
  b.insert_all(std::vector<ElementId>{3, 4});
  a.merge_in(b);
  CHECK(a.estimate() == 4.0);
}

TEST_CASE("empty sketch is the merge identity") {
  std::mt19937_64 rng(3);
  F0Sketch s(small_config(32));
  s.insert_all(random_set(rng, 100, 1000));
  F0Sketch empty(small_config(32));
  F0Sketch m = empty;
  m.merge_in(s);
  CHECK(m == s);
}

TEST_CASE("merge is commutative and associative") {
  std::mt19937_64 rng(4);
  std::vector<F0Sketch> parts;
  for (int i = 0; i < 3; ++i) {
    F0Sketch s(small_config(20));
    s.insert_all(random_set(rng, 60, 200));
    parts.push_back(s);
  }
  std::vector<int> order = {0, 1, 2};
  std::optional<F0Sketch> first;
  do {
    F0Sketch m = parts[order[0]];
    m.merge_in(parts[order[1]]);
    m.merge_in(parts[order[2]]);
    if (!first) first = m;
    CHECK(m == *first);
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<F0Sketch> list = {parts[2], parts[0], parts[1]};
  CHECK(F0Sketch::merge(list) == *first);
}

TEST_CASE("merge equals insertion of the union") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s1 = random_set(rng, 300, 2000);
    const auto s2 = random_set(rng, 300, 2000);
    F0Sketch a(small_config(64, 5, trial)), b(small_config(64, 5, trial)), u(small_config(64, 5, trial));
    a.insert_all(s1);
    b.insert_all(s2);
    u.insert_all(s1);
    u.insert_all(s2);
    a.merge_in(b);
    CHECK(a == u);
  }
}

TEST_CASE("incompatible sketches refuse to merge") {
  F0Sketch a(small_config(8, 3, 1)), b(small_config(8, 3, 2)), c(small_config(9, 3, 1));
  CHECK_THROWS_AS(a.merge_in(b), IncompatibleSketch);
  CHECK_THROWS_AS(a.merge_in(c), IncompatibleSketch);
  CHECK_FALSE(a.compatible_with(b));
}

TEST_CASE("10^4 elements at eps 0.1, delta 0.05: within 10% in 95% of seeds") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    F0Sketch s(F0Config::for_accuracy(0.1, 0.05, seed));
    for (ElementId e = 0; e < 10000; ++e) s.insert(e * 7919 + seed);
    const double est = s.estimate();
    if (est >= 9000.0 && est <= 11000.0) ++good;
  }
  CHECK(good >= 190);
}

TEST_CASE("serialization round trip and validation") {
  std::mt19937_64 rng(6);
  F0Sketch s(small_config(16, 4, 77));
  s.insert_all(random_set(rng, 50, 500));
  std::stringstream buf;
  s.serialize(buf);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "F0SK");
  std::stringstream in(bytes);
  CHECK(F0Sketch::deserialize(in) == s);

  std::stringstream bad_magic("XXXX" + bytes.substr(4));
  CHECK_THROWS_AS(F0Sketch::deserialize(bad_magic), FormatError);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(F0Sketch::deserialize(truncated), FormatError);
  std::string wrong_version = bytes;
  wrong_version[4] = 9;
  std::stringstream wv(wrong_version);
  CHECK_THROWS_AS(F0Sketch::deserialize(wv), FormatError);
}
