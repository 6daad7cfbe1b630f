#pragma once

#include <cstdint>

#include "copson/exact.hpp"

namespace copson {

// splitmix64: deterministic across platforms, which the seeded test
// harnesses and reproducible reports rely on.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  long next_in(long lo, long hi) {  // inclusive; modulo bias is irrelevant here
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Small-denominator rationals keep exact-mode checks cheap.
  Rational rational(long num_lo, long num_hi, long den_hi = 8) {
    Rational r(next_in(num_lo, num_hi), next_in(1, den_hi));
    r.canonicalize();
    return r;
  }

  Rational positive_rational(long num_hi = 8, long den_hi = 8) { return rational(1, num_hi, den_hi); }
};

}  // namespace copson
