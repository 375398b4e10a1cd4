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
#include <vector>

#include "maxcov/setstream.hpp"

namespace maxcov {

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);
// Smallest prime >= n.
std::uint64_t next_prime(std::uint64_t n);

// SplitMix64 finalizer. Used to derive independent sub-seeds from one master seed.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0);

// Random polynomial of degree d-1 over GF(prime); a d-wise independent family.
class PolyHash {
 public:
  // prime = next_prime(max(universe_size, degree + 1)); coefficients uniform over the field.
  static PolyHash build(std::size_t degree, std::uint64_t universe_size, std::uint64_t seed);
  // Explicit coefficients, lowest order first. Used to enumerate the family exhaustively.
  static PolyHash from_coefficients(std::uint64_t prime, std::vector<std::uint64_t> coefficients,
                                    std::uint64_t universe_size);

  std::uint64_t operator()(std::uint64_t x) const;

  std::uint64_t prime() const { return prime_; }
  std::size_t degree() const { return coefficients_.size(); }
  std::uint64_t universe_size() const { return universe_size_; }
  std::uint64_t seed() const { return seed_; }
  std::span<const std::uint64_t> coefficients() const { return coefficients_; }

 private:
  PolyHash() = default;

  std::uint64_t prime_ = 2;
  std::uint64_t universe_size_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> coefficients_;
};

// Independence degree for a subsampling hash: 2*lambda rounded up to a power of two,
// clamped to [1, max_degree].
std::size_t independence_degree(double lambda, std::size_t max_degree = 4096);

// Keeps element e iff hash(e) < floor(p * prime).
class Subsampler {
 public:
  Subsampler(PolyHash hash, double probability);

  // Throws DomainError when e is outside the hash's universe.
  bool member(ElementId e) const;

  const PolyHash& hash() const { return hash_; }
  double probability() const { return probability_; }
  std::uint64_t threshold() const { return threshold_; }
  // threshold / prime, within 1/prime below the requested probability.
  double realized_probability() const;
  bool is_identity() const { return threshold_ >= hash_.prime(); }

 private:
  PolyHash hash_;
  double probability_;
  std::uint64_t threshold_;
};

}  // namespace maxcov
