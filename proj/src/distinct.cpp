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

#include "maxcov/distinct.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "maxcov/errors.hpp"

namespace maxcov {

namespace {

constexpr std::uint64_t kRepetitionTag = 0xF05EEDULL;
constexpr char kMagic[4] = {'F', '0', 'S', 'K'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw FormatError("truncated F0 sketch");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

F0Config F0Config::for_accuracy(double eps, double delta, std::uint64_t seed, double c0,
                                std::size_t max_repetitions) {
  if (!(eps > 0.0)) throw DomainError("sketch accuracy eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("sketch failure probability must be in (0,1)");
  F0Config cfg;
  cfg.capacity = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(c0 / (eps * eps))));
  auto reps = static_cast<std::size_t>(std::ceil(std::log(1.0 / delta)));
  cfg.repetitions = std::clamp<std::size_t>(reps, 1, std::max<std::size_t>(max_repetitions, 1));
  cfg.seed = seed;
  return cfg;
}

struct F0Sketch::Hashes {
  std::vector<PolyHash> per_repetition;
};

std::shared_ptr<const F0Sketch::Hashes> F0Sketch::hashes_for(const F0Config& config) {
  auto hashes = std::make_shared<Hashes>();
  hashes->per_repetition.reserve(config.repetitions);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    hashes->per_repetition.push_back(
        PolyHash::build(kHashDegree, kFieldPrime, derive_seed(config.seed, kRepetitionTag, r)));
  }
  return hashes;
}

F0Sketch::F0Sketch(const F0Config& config) : config_(config) {
  if (config.capacity < 2) throw DomainError("F0 sketch capacity must be at least 2");
  if (config.repetitions < 1) throw DomainError("F0 sketch needs at least one repetition");
  hashes_ = hashes_for(config);
  min_values_.resize(config.repetitions);
}

void F0Sketch::insert(ElementId e) {
  const std::size_t t = config_.capacity;
  for (std::size_t r = 0; r < min_values_.size(); ++r) {
    auto& mins = min_values_[r];
    const std::uint64_t h = hashes_->per_repetition[r](e);
    if (mins.size() == t && h >= mins.back()) continue;
    auto it = std::lower_bound(mins.begin(), mins.end(), h);
    if (it != mins.end() && *it == h) continue;
    mins.insert(it, h);
    if (mins.size() > t) mins.pop_back();
  }
}

bool F0Sketch::compatible_with(const F0Sketch& other) const {
  return config_ == other.config_;
}

void F0Sketch::merge_in(const F0Sketch& other) {
  if (!compatible_with(other)) {
    throw IncompatibleSketch("F0 sketches differ in seed, capacity or repetitions");
  }
  const std::size_t t = config_.capacity;
  std::vector<std::uint64_t> merged;
  for (std::size_t r = 0; r < min_values_.size(); ++r) {
    const auto& a = min_values_[r];
    const auto& b = other.min_values_[r];
    merged.clear();
    merged.reserve(std::min(t, a.size() + b.size()));
    std::size_t i = 0, j = 0;
    while (merged.size() < t && (i < a.size() || j < b.size())) {
      std::uint64_t next;
      if (j == b.size() || (i < a.size() && a[i] < b[j])) {
        next = a[i++];
      } else if (i == a.size() || b[j] < a[i]) {
        next = b[j++];
      } else {
        next = a[i];
        ++i;
        ++j;
      }
      merged.push_back(next);
    }
    min_values_[r].assign(merged.begin(), merged.end());
  }
}

F0Sketch F0Sketch::merge(std::span<const F0Sketch> sketches) {
  if (sketches.empty()) throw DomainError("merge needs at least one sketch");
  F0Sketch out = sketches.front();
  for (std::size_t i = 1; i < sketches.size(); ++i) out.merge_in(sketches[i]);
  return out;
}

double F0Sketch::estimate() const {
  const std::size_t t = config_.capacity;
  std::vector<double> estimates;
  estimates.reserve(min_values_.size());
  for (const auto& mins : min_values_) {
    if (mins.size() < t) {
      estimates.push_back(static_cast<double>(mins.size()));
    } else {
      const double vt = static_cast<double>(std::max<std::uint64_t>(mins.back(), 1));
      estimates.push_back(static_cast<double>(t - 1) * static_cast<double>(kFieldPrime) / vt);
    }
  }
  std::sort(estimates.begin(), estimates.end());
  const std::size_t n = estimates.size();
  if (n % 2 == 1) return estimates[n / 2];
  return 0.5 * (estimates[n / 2 - 1] + estimates[n / 2]);
}

std::size_t F0Sketch::registers() const {
  std::size_t total = 0;
  for (const auto& mins : min_values_) total += mins.size();
  return total;
}

bool F0Sketch::operator==(const F0Sketch& other) const {
  return config_ == other.config_ && min_values_ == other.min_values_;
}

void F0Sketch::serialize(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(config_.capacity));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(config_.repetitions));
  put_le<std::uint64_t>(out, config_.seed);
  for (const auto& mins : min_values_) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(mins.size()));
    for (auto v : mins) put_le<std::uint64_t>(out, v);
  }
}

F0Sketch F0Sketch::deserialize(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not an F0 sketch (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw FormatError("unsupported F0 sketch version " + std::to_string(version));
  }
  F0Config cfg;
  cfg.capacity = get_le<std::uint32_t>(in);
  cfg.repetitions = get_le<std::uint32_t>(in);
  cfg.seed = get_le<std::uint64_t>(in);
  F0Sketch sk(cfg);
  for (auto& mins : sk.min_values_) {
    const auto len = get_le<std::uint32_t>(in);
    if (len > cfg.capacity) throw FormatError("repetition longer than capacity");
    mins.resize(len);
    for (auto& v : mins) v = get_le<std::uint64_t>(in);
    if (!std::is_sorted(mins.begin(), mins.end()) ||
        std::adjacent_find(mins.begin(), mins.end()) != mins.end()) {
      throw FormatError("repetition values not strictly ascending");
    }
  }
  return sk;
}

}  // namespace maxcov
