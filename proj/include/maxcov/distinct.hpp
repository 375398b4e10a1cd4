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
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "maxcov/hashing.hpp"
#include "maxcov/setstream.hpp"

namespace maxcov {

// Parameters and hash functions shared by every sketch that may be merged together.
struct F0Config {
  std::size_t capacity = 64;     // t: minimum values kept per repetition
  std::size_t repetitions = 1;   // independent estimates, combined by median
  std::uint64_t seed = 0;

  // t = ceil(c0 / eps^2), repetitions = ceil(ln(1/delta)) clamped to [1, max_repetitions].
  static F0Config for_accuracy(double eps, double delta, std::uint64_t seed, double c0 = 4.0,
                               std::size_t max_repetitions = 64);

  bool operator==(const F0Config&) const = default;
};

// k-minimum-values distinct-count sketch with one KMV summary per repetition.
// Each repetition hashes into GF(2^61 - 1) with an independent 4-wise independent polynomial.
class F0Sketch {
 public:
  static constexpr std::uint64_t kFieldPrime = (1ULL << 61) - 1;
  static constexpr std::size_t kHashDegree = 4;

  explicit F0Sketch(const F0Config& config);

  void insert(ElementId e);
  template <typename Range>
  void insert_all(const Range& elements) {
    for (ElementId e : elements) insert(e);
  }

  // Union in place. Throws IncompatibleSketch when seeds or capacities differ.
  void merge_in(const F0Sketch& other);
  static F0Sketch merge(std::span<const F0Sketch> sketches);

  // Exact count while a repetition holds fewer than t values; otherwise
  // (t - 1) * prime / v_t. Median over repetitions.
  double estimate() const;

  const F0Config& config() const { return config_; }
  bool compatible_with(const F0Sketch& other) const;
  std::span<const std::uint64_t> min_values(std::size_t repetition) const {
    return min_values_[repetition];
  }
  // Number of stored hash values across repetitions.
  std::size_t registers() const;

  // Little-endian binary: "F0SK", u32 version, u32 t, u32 repetitions, u64 seed,
  // then per repetition a u32 length followed by that many u64 values.
  void serialize(std::ostream& out) const;
  static F0Sketch deserialize(std::istream& in);
  static constexpr std::uint32_t kFormatVersion = 1;

  bool operator==(const F0Sketch& other) const;

 private:
  struct Hashes;
  static std::shared_ptr<const Hashes> hashes_for(const F0Config& config);

  F0Config config_;
  std::shared_ptr<const Hashes> hashes_;
  std::vector<std::vector<std::uint64_t>> min_values_;
};

}  // namespace maxcov
