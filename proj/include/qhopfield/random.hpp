// Copyright 2026 The qhopfield Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qhop {

using Rng = std::mt19937_64;

/// Avalanche mixer (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of a parent seed. Used for trajectory
/// batches and experiment realizations so that every child stream can be
/// regenerated in isolation, independently of scheduling.
constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t a,
                                   std::uint64_t b) {
  return split_seed(split_seed(parent, a), b);
}

/// Uniform double in the open interval (0, 1), built from the top 53 bits so
/// the stream is identical across standard library implementations.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; portable, unlike
/// std::uniform_int_distribution.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace qhop
