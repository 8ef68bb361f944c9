//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace isq {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed for stream (a, b) under a root seed. Pure function, so trial streams
// can be created in any order, on any thread, with identical results.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(root) ^ a) ^ b);
}

// Deterministic random stream. Gaussian draws use Box-Muller on top of
// mt19937_64 rather than std::normal_distribution so the byte stream does
// not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  // Independent substream; does not consume or depend on draws made here.
  Rng split(std::uint64_t label) const { return Rng(derive_seed(seed_, 0x737562u, label)); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian() {
    const double u = 1.0 - uniform01();  // (0, 1]
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

  double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Uniform index in [0, k); unbiased via rejection.
  std::size_t index(std::size_t k) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % k;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return static_cast<std::size_t>(r % k);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace isq
