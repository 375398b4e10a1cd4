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

#include "maxcov/hashing.hpp"

#include <cmath>
#include <random>
#include <string>

#include "maxcov/errors.hpp"

namespace maxcov {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact below 3.3e24, so for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t candidate = n | 1;
  while (!is_prime(candidate)) candidate += 2;
  return candidate;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  return mix64(mix64(mix64(master) ^ tag) ^ index);
}

PolyHash PolyHash::build(std::size_t degree, std::uint64_t universe_size, std::uint64_t seed) {
  if (degree == 0) throw DomainError("hash degree must be at least 1");
  PolyHash h;
  h.prime_ = next_prime(std::max<std::uint64_t>(universe_size, degree + 1));
  h.universe_size_ = universe_size;
  h.seed_ = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> coeff(0, h.prime_ - 1);
  h.coefficients_.resize(degree);
  for (auto& c : h.coefficients_) c = coeff(rng);
  return h;
}

PolyHash PolyHash::from_coefficients(std::uint64_t prime, std::vector<std::uint64_t> coefficients,
                                     std::uint64_t universe_size) {
  if (!is_prime(prime)) throw DomainError(std::to_string(prime) + " is not prime");
  if (coefficients.empty()) throw DomainError("hash degree must be at least 1");
  for (auto c : coefficients) {
    if (c >= prime) throw DomainError("coefficient outside the field");
  }
  PolyHash h;
  h.prime_ = prime;
  h.universe_size_ = universe_size;
  h.coefficients_ = std::move(coefficients);
  return h;
}

std::uint64_t PolyHash::operator()(std::uint64_t x) const {
  const std::uint64_t p = prime_;
  std::uint64_t acc = 0;
  if (p <= (1ULL << 32)) {
    x %= p;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = (acc * x + *it) % p;
    }
  } else {
    x %= p;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = static_cast<std::uint64_t>((static_cast<u128>(acc) * x + *it) % p);
    }
  }
  return acc;
}

std::size_t independence_degree(double lambda, std::size_t max_degree) {
  const double target = std::ceil(2.0 * std::max(lambda, 0.5));
  std::size_t degree = 1;
  while (static_cast<double>(degree) < target && degree < max_degree) degree <<= 1;
  return std::min(degree, std::max<std::size_t>(max_degree, 1));
}

Subsampler::Subsampler(PolyHash hash, double probability)
    : hash_(std::move(hash)), probability_(probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw DomainError("sampling probability must lie in [0, 1]");
  }
  const auto prime = hash_.prime();
  if (probability >= 1.0) {
    threshold_ = prime;
  } else {
    threshold_ = static_cast<std::uint64_t>(std::floor(probability * static_cast<double>(prime)));
    threshold_ = std::min(threshold_, prime);
  }
}

bool Subsampler::member(ElementId e) const {
  if (e >= hash_.universe_size()) {
    throw DomainError("element " + std::to_string(e) + " outside universe of size " +
                      std::to_string(hash_.universe_size()));
  }
  if (is_identity()) return true;
  return hash_(e) < threshold_;
}

double Subsampler::realized_probability() const {
  return static_cast<double>(threshold_) / static_cast<double>(hash_.prime());
}

}  // namespace maxcov
