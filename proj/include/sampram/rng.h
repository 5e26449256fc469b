// Copyright 2026 The sampram Authors
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

// Deterministic, splittable pseudo-random streams.
//
// Every randomized step (sampling plan, pad keys, PRAM noise, synthetic data)
// takes an explicit 64-bit seed. Streams for independent trials come from
// DeriveSeed(), so concurrent workers never share generator state and any
// single trial can be replayed in isolation. The generator is SplitMix64.
// Integer and real draws are implemented here rather than through the
// <random> distributions so output is identical across standard libraries.

#ifndef SAMPRAM_RNG_H_
#define SAMPRAM_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace sampram {

// SplitMix64 finalizer (Stafford variant 13).
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Folds a path of coordinates (grid index, trial index, role tag, ...) into a
// child seed of `seed`.
constexpr uint64_t DeriveSeed(uint64_t seed,
                              std::initializer_list<uint64_t> path) {
  uint64_t h = Mix64(seed ^ 0x6A09E667F3BCC909ULL);
  for (uint64_t p : path) {
    h = Mix64(h + 0x9E3779B97F4A7C15ULL + Mix64(p));
  }
  return h;
}

class Prng {
 public:
  using result_type = uint64_t;

  explicit constexpr Prng(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() { return Next(); }

  constexpr uint64_t Next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return Mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double UniformDouble() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, bound); `bound` must be positive. Lemire's multiply-shift
  // with rejection, so the result is exactly uniform.
  uint64_t UniformInt(uint64_t bound) {
    unsigned __int128 product =
        static_cast<unsigned __int128>(Next()) * bound;
    uint64_t low = static_cast<uint64_t>(product);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(Next()) * bound;
        low = static_cast<uint64_t>(product);
      }
    }
    return static_cast<uint64_t>(product >> 64);
  }

 private:
  uint64_t state_;
};

}  // namespace sampram

#endif  // SAMPRAM_RNG_H_
