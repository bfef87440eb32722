// Copyright 2026 The pridda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIDDA_RANDOM_H_
#define PRIDDA_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace pridda {

// Sequential random source used where draws are naturally ordered (topology
// sampling, data generation, partitioning).
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a list of words into one 64-bit key. Used to derive independent
// streams from (seed, purpose, node, time) tuples.
constexpr uint64_t DeriveKey(std::initializer_list<uint64_t> words) {
  uint64_t key = 0x6a09e667f3bcc909ULL;
  for (uint64_t w : words) key = Mix64(key ^ Mix64(w));
  return key;
}

// Small counter-based generator satisfying UniformRandomBitGenerator. Cheap
// to construct, so one can be created per (node, step) event and the draws for
// that event do not depend on what any other node did earlier.
class KeyedRng {
 public:
  using result_type = uint64_t;

  explicit KeyedRng(uint64_t key) : state_(key) {}
  KeyedRng(std::initializer_list<uint64_t> words) : state_(DeriveKey(words)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// Stream tags for DeriveKey.
enum class Stream : uint64_t {
  kTopology = 1,
  kDataSample = 2,
  kNoise = 3,
  kPartition = 4,
  kSynthetic = 5,
};

}  // namespace pridda

#endif  // PRIDDA_RANDOM_H_
