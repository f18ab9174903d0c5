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

#ifndef BRPI_RNG_H_
#define BRPI_RNG_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace brpi {

// Deterministic random streams with platform-stable output.
//
// A stream is derived from a master seed plus a list of integer tags (for
// example {kDynamics, iteration, player, sample}) by hashing with the
// splitmix64 finalizer; draws come from xoshiro256**. Sampling helpers are
// implemented directly on the 64-bit output (no <random> distributions), so a
// given (seed, tags) pins the exact draw sequence on every platform. Streams
// derived from distinct tag lists are independent for all practical purposes,
// which is what makes checkpoint resume reproduce the original run exactly:
// the continuation re-derives the same per-iteration streams instead of
// depending on carried-over generator state.
class RngStream {
 public:
  explicit RngStream(uint64_t key);

  uint64_t NextUint64();

  // Uniform in [0, 1), 53-bit mantissa.
  double NextDouble();

  // Uniform in {0, ..., n - 1}; unbiased (Lemire rejection). n must be > 0.
  int NextBelow(int n);

  // Categorical draw over non-negative weights (need not be normalized).
  // Consumes exactly one NextDouble. Weight total must be positive.
  int NextIndex(std::span<const double> weights);

 private:
  std::array<uint64_t, 4> state_;
};

// Hash chain over (seed, tags...), usable both as a stream key and as a
// derived sub-seed.
uint64_t DeriveKey(uint64_t seed, std::initializer_list<uint64_t> tags);

RngStream DeriveStream(uint64_t seed, std::initializer_list<uint64_t> tags);

}  // namespace brpi

#endif  // BRPI_RNG_H_
