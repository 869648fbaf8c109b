#pragma once

// Deterministic PRNG for noise sampling and weight init.
//
// xoshiro256** seeded via SplitMix64, both as published by Blackman & Vigna
// (https://prng.di.unimi.it/). The integer stream for a given seed is
// bit-identical on every platform. Derived real draws use the standard 53-bit
// mapping; normals use Box-Muller with two fresh u64 draws per sample (no
// spare caching), so a port only has to match splitmix/xoshiro plus libm.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace inrfort {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // SplitMix64 expands the 64-bit seed into the 256-bit state.
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t t = z;
      t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
      t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
      word = t ^ (t >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Standard normal via Box-Muller; consumes exactly two u64 draws.
  double next_normal() {
    // +1 keeps u1 in (0, 1] so the log stays finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::vector<double> normal(std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = next_normal();
    return out;
  }

  // Each entry is 0 with probability p, else 1.
  std::vector<double> bernoulli_mask(std::size_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("bernoulli_mask: p must be in [0, 1]");
    }
    std::vector<double> out(n);
    for (auto& x : out) x = (next_unit() < p) ? 0.0 : 1.0;
    return out;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace inrfort
