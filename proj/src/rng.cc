// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/rng.h"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace rsrt {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t DeriveSeed(std::uint64_t master_seed, std::string_view id) {
  return Mix64(master_seed ^ Mix64(Fnv1a64(id)));
}

std::uint64_t CounterRng::Next() {
  ++counter_;
  return Mix64(seed_ + counter_ * kGolden);
}

std::uint64_t CounterRng::UniformBelow(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformBelow(0)");
  const std::uint64_t reject_below = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = Next();
    if (r >= reject_below) return r % n;
  }
}

CounterRng CounterRng::Split(std::uint64_t key) const {
  return CounterRng(Mix64(seed_ ^ Mix64(key)));
}

std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t k,
                                                  CounterRng& rng) {
  if (k > n) throw std::invalid_argument("sample larger than population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.UniformBelow(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::vector<std::size_t> Permutation(std::size_t n, CounterRng& rng) {
  return SampleWithoutReplacement(n, n, rng);
}

}  // namespace rsrt
