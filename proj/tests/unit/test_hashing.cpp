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

#include <map>
#include <numeric>

#include "maxcov/errors.hpp"
#include "maxcov/hashing.hpp"

using namespace maxcov;

namespace {

// Trial division; independent of the Miller-Rabin code under test.
bool slow_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Enumerates every coefficient vector of length `degree` over GF(prime) and
// counts value tuples at the given points. Uniform <=> d-wise independent.
bool uniform_over_family(std::uint64_t prime, std::size_t degree, const std::vector<std::uint64_t>& points) {
  std::map<std::vector<std::uint64_t>, std::size_t> counts;
  std::vector<std::uint64_t> coeffs(degree, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < degree; ++i) total *= prime;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < degree; ++i) {
      coeffs[i] = c % prime;
      c /= prime;
    }
    PolyHash h = PolyHash::from_coefficients(prime, coeffs, prime);
    std::vector<std::uint64_t> values;
    for (auto x : points) values.push_back(h(x));
    ++counts[values];
  }
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < points.size(); ++i) tuples *= prime;
  if (counts.size() != tuples) return false;
  for (const auto& [values, n] : counts) {
    if (n != total / tuples) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == slow_prime(n));
  CHECK(is_prime((1ULL << 61) - 1));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(next_prime(5) == 5);
  CHECK(next_prime(24) == 29);
  CHECK(next_prime(0) == 2);
}

TEST_CASE("build picks the smallest prime covering universe and degree") {
  CHECK(PolyHash::build(1, 5, 1).prime() == 5);
  CHECK(PolyHash::build(7, 5, 1).prime() == 11);
  CHECK(PolyHash::build(2, 1000, 1).prime() == 1009);
}

TEST_CASE("degree 1 is a constant function") {
  PolyHash h = PolyHash::build(1, 5, 99);
  for (std::uint64_t x = 1; x < 5; ++x) CHECK(h(x) == h(0));
}

TEST_CASE("degree 2 over GF(5): all 25 value pairs occur once") {
  for (std::uint64_t a = 0; a < 5; ++a) {
    for (std::uint64_t b = a + 1; b < 5; ++b) CHECK(uniform_over_family(5, 2, {a, b}));
  }
}

TEST_CASE("exhaustive d-wise independence for prime <= 7, degree <= 3") {
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    for (std::size_t d = 1; d <= 3 && d <= p; ++d) {
      std::vector<std::uint64_t> pts(d);
      std::iota(pts.begin(), pts.end(), 0);
      CHECK(uniform_over_family(p, d, pts));
      if (d + 1 <= p) {
        std::vector<std::uint64_t> shifted(pts);
        for (auto& x : shifted) x = (x * 2 + 1) % p;
        std::sort(shifted.begin(), shifted.end());
        if (std::adjacent_find(shifted.begin(), shifted.end()) == shifted.end()) {
          CHECK(uniform_over_family(p, d, shifted));
        }
      }
    }
  }
  // Degree 2 is not 3-wise independent: a triple's values are not uniform.
  CHECK_FALSE(uniform_over_family(5, 2, {0, 1, 2}));
}

TEST_CASE("same seed gives identical coefficients and values") {
  PolyHash a = PolyHash::build(16, 100000, 1234);
  PolyHash b = PolyHash::build(16, 100000, 1234);
  PolyHash c = PolyHash::build(16, 100000, 1235);
  CHECK(std::equal(a.coefficients().begin(), a.coefficients().end(), b.coefficients().begin()));
  bool differs = false;
  for (std::uint64_t x = 0; x < 1000; ++x) {
    CHECK(a(x) == b(x));
    differs = differs || a(x) != c(x);
  }
  CHECK(differs);
  for (auto co : a.coefficients()) CHECK(co < a.prime());
}

TEST_CASE("Horner evaluation matches a naive sum over a large prime") {
  const std::uint64_t p = (1ULL << 61) - 1;
  std::vector<std::uint64_t> co = {p - 1, p - 2, 12345, p - 3};
  PolyHash h = PolyHash::from_coefficients(p, co, p);
  for (std::uint64_t x : std::vector<std::uint64_t>{0, 1, 2, 1000000007, p - 1}) {
    unsigned __int128 acc = 0, pw = 1;
    for (auto c : co) {
      acc = (acc + static_cast<unsigned __int128>(c) * pw) % p;
      pw = pw * x % p;
    }
    CHECK(h(x) == static_cast<std::uint64_t>(acc));
  }
}

TEST_CASE("subsampler edge probabilities") {
  PolyHash h = PolyHash::build(8, 1000, 3);
  Subsampler all(h, 1.0);
  Subsampler none(h, 0.0);
  CHECK(all.is_identity());
  for (ElementId e = 0; e < 1000; ++e) {
    CHECK(all.member(e));
    CHECK_FALSE(none.member(e));
  }
  CHECK_THROWS_AS(all.member(1000), DomainError);
  CHECK_THROWS_AS(Subsampler(h, 1.5), DomainError);
  CHECK_THROWS_AS(Subsampler(h, -0.1), DomainError);
}

TEST_CASE("realized probability is within 1/prime below p") {
  PolyHash h = PolyHash::build(4, 997, 5);
  for (double p : {0.1, 0.25, 0.5, 0.77}) {
    Subsampler s(h, p);
    CHECK(s.threshold() == static_cast<std::uint64_t>(p * static_cast<double>(h.prime())));
    CHECK(s.realized_probability() <= p);
    CHECK(s.realized_probability() >= p - 1.0 / static_cast<double>(h.prime()));
  }
}

TEST_CASE("p = 0.1 over [0, 10^4) keeps about a tenth") {
  PolyHash h = PolyHash::build(32, 10000, 77);
  Subsampler s(h, 0.1);
  std::size_t kept = 0;
  for (ElementId e = 0; e < 10000; ++e) kept += s.member(e) ? 1 : 0;
  const double frac = static_cast<double>(kept) / 10000.0;
  CHECK(frac >= 0.08);
  CHECK(frac <= 0.12);
}

TEST_CASE("concentration of a subsampled set over 200 seeds") {
  const double lambda = 100.0, eps = 0.3;
  const std::size_t size = 10000;
  const double p = lambda / static_cast<double>(size);
  const std::size_t degree = independence_degree(lambda);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Subsampler s(PolyHash::build(degree, size, derive_seed(11, 1, seed)), p);
    std::size_t kept = 0;
    for (ElementId e = 0; e < size; ++e) kept += s.member(e) ? 1 : 0;
    const double expect = p * static_cast<double>(size);
    if (std::abs(static_cast<double>(kept) - expect) <= eps * expect) ++good;
  }
  CHECK(good >= 190);
}

TEST_CASE("independence degree rounding") {
  CHECK(independence_degree(100) == 256);
  CHECK(independence_degree(0.2) == 1);
  CHECK(independence_degree(1) == 2);
  CHECK(independence_degree(10000) == 4096);
  CHECK(independence_degree(10000, 512) == 512);
}

TEST_CASE("derive_seed separates tags and indices") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}
