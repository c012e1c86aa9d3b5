// Copyright 2026 The hodgeflow Authors
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

#include <array>
#include <cstdint>
#include <vector>

namespace hodgeflow {

// xoshiro256** seeded through splitmix64. All sampling routines below are
// implemented here rather than via <random> distributions so that generated
// data is bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  // Uniform integer in the closed range [lo, hi].
  std::int64_t uniform_range(std::int64_t lo, std::int64_t hi);

  // Standard normal via the Marsaglia polar method.
  double normal();

  // Random permutation of 0..n-1 (Fisher-Yates).
  std::vector<int> permutation(int n);

  // k distinct values from 0..n-1, in sampled order.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::array<std::uint64_t, 4> state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes a base seed with a stream index into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hodgeflow
