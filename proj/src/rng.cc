// Copyright 2026 The brpi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "brpi/rng.h"

#include <stdexcept>

namespace brpi {
namespace {

inline uint64_t RotL(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// splitmix64 finalizer (Vigna / Steele et al.), public-domain constants.
inline uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t SplitMix64Next(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  return Mix64(s);
}

}  // namespace

RngStream::RngStream(uint64_t key) {
  uint64_t s = key;
  for (auto& word : state_) word = SplitMix64Next(s);
  // xoshiro256** is undefined on an all-zero state; splitmix seeding cannot
  // produce one, but guard anyway.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

uint64_t RngStream::NextUint64() {
  const uint64_t result = RotL(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = RotL(state_[3], 45);
  return result;
}

double RngStream::NextDouble() {
  return static_cast<double>(NextUint64() >> 11) * 0x1.0p-53;
}

int RngStream::NextBelow(int n) {
  if (n <= 0) throw std::invalid_argument("RngStream::NextBelow: n must be > 0");
  const uint64_t bound = static_cast<uint64_t>(n);
  unsigned __int128 m =
      static_cast<unsigned __int128>(NextUint64()) * bound;
  auto low = static_cast<uint64_t>(m);
  if (low < bound) {
    const uint64_t threshold = (-bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(NextUint64()) * bound;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<int>(m >> 64);
}

int RngStream::NextIndex(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("RngStream::NextIndex: negative weight");
    total += w;
  }
  if (!(total > 0)) {
    throw std::invalid_argument("RngStream::NextIndex: weight total must be positive");
  }
  const double u = NextDouble() * total;
  double cum = 0;
  int last_positive = -1;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    last_positive = static_cast<int>(i);
    cum += weights[i];
    if (u < cum) return last_positive;
  }
  // Rounding in the cumulative sum can leave u marginally above it.
  return last_positive;
}

uint64_t DeriveKey(uint64_t seed, std::initializer_list<uint64_t> tags) {
  // Chain the finalizer over the tags; the odd constant separates the empty
  // tag list from the raw seed.
  uint64_t key = Mix64(seed ^ 0x243f6a8885a308d3ULL);
  for (uint64_t tag : tags) key = Mix64(key ^ Mix64(tag + 0x9e3779b97f4a7c15ULL));
  return key;
}

RngStream DeriveStream(uint64_t seed, std::initializer_list<uint64_t> tags) {
  return RngStream(DeriveKey(seed, tags));
}

}  // namespace brpi
