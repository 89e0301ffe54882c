// Copyright 2026 The corpusforge Authors.
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

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace corpusforge::minhash {

using Trigram = std::array<std::uint32_t, 3>;

// Distinct contiguous triples, sorted.
inline std::vector<Trigram> trigram_set(const std::vector<std::uint32_t>& v) {
  std::vector<Trigram> out;
  if (v.size() < 3) return out;
  out.reserve(v.size() - 2);
  for (std::size_t i = 0; i + 2 < v.size(); ++i) out.push_back({v[i], v[i + 1], v[i + 2]});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double jaccard(const std::vector<Trigram>& a, const std::vector<Trigram>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common, ++i, ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t base_hash(const Trigram& t) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : t) h = mix64(h ^ (v + 0x632be59bd9b4e019ULL));
  return h;
}

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
inline constexpr std::uint64_t kEmptySlot = std::numeric_limits<std::uint64_t>::max();

struct Signature {
  std::vector<std::uint64_t> values;
  std::uint64_t seed = 0;

  // Signature of the empty set; never matches anything, itself included.
  bool empty() const { return values.empty() || values.front() == kEmptySlot; }
  bool operator==(const Signature&) const = default;
};

// h_i(x) = (a_i * x + b_i) mod (2^61 - 1), parameters drawn from seed.
class Hasher {
 public:
  explicit Hasher(std::uint64_t seed, std::size_t permutations = 128) : seed_(seed) {
    if (permutations == 0) throw std::invalid_argument("permutation count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick_a(1, kMersenne61 - 1);
    std::uniform_int_distribution<std::uint64_t> pick_b(0, kMersenne61 - 1);
    a_.resize(permutations);
    b_.resize(permutations);
    for (std::size_t i = 0; i < permutations; ++i) {
      a_[i] = pick_a(rng);
      b_[i] = pick_b(rng);
    }
  }

  std::size_t permutations() const { return a_.size(); }
  std::uint64_t seed() const { return seed_; }

  Signature operator()(const std::vector<Trigram>& trigrams) const {
    Signature sig{std::vector<std::uint64_t>(a_.size(), kEmptySlot), seed_};
    for (const auto& t : trigrams) {
      const std::uint64_t x = base_hash(t) % kMersenne61;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        const unsigned __int128 prod = static_cast<unsigned __int128>(a_[i]) * x + b_[i];
        const auto h = static_cast<std::uint64_t>(prod % kMersenne61);
        if (h < sig.values[i]) sig.values[i] = h;
      }
    }
    return sig;
  }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> a_, b_;
};

inline Signature signature(const std::vector<Trigram>& trigrams, std::uint64_t seed,
                           std::size_t permutations = 128) {
  return Hasher(seed, permutations)(trigrams);
}

// Fraction of positions with equal values.
inline double similarity(const Signature& a, const Signature& b) {
  if (a.seed != b.seed) throw std::invalid_argument("signatures use different seeds");
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("signatures have different lengths");
  }
  if (a.empty() || b.empty()) return 0.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) same += a.values[i] == b.values[i];
  return static_cast<double>(same) / static_cast<double>(a.values.size());
}

}  // namespace corpusforge::minhash
