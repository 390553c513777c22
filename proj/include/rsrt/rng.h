// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_RNG_H_
#define RSRT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rsrt {

// All randomness in the library goes through this generator so that a
// dataset can be regenerated bit-for-bit from its seed on any platform.
//
// Algorithm (fixed, part of the reproducibility contract):
//   Mix64       = SplitMix64 finaliser
//                 z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//                 z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
//   draw #i     = Mix64(seed + i * 0x9E3779B97F4A7C15), i = 1, 2, ...
//   Split(key)  = CounterRng(Mix64(seed ^ Mix64(key)))
//   UniformBelow(n) rejects draws below (2^64 mod n), then returns draw % n.
//   DeriveSeed(master, id) = Mix64(master ^ Mix64(FNV-1a-64(id)))

std::uint64_t Mix64(std::uint64_t z);
std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t DeriveSeed(std::uint64_t master_seed, std::string_view id);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t Next();
  /// Unbiased integer in [0, n). n must be positive.
  std::uint64_t UniformBelow(std::uint64_t n);
  CounterRng Split(std::uint64_t key) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// k distinct indices from [0, n) by partial Fisher-Yates, in draw order.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  CounterRng& rng);

/// Full Fisher-Yates permutation of [0, n).
std::vector<std::size_t> Permutation(std::size_t n, CounterRng& rng);

}  // namespace rsrt

#endif  // RSRT_RNG_H_
