#pragma once

#include <cstdint>

namespace essclose {

/// Counter-based generator: a pure function of (seed, counter), so draw i can
/// be computed independently of draws 0..i-1. Parallel chunking over the
/// counter range reproduces the sequential stream exactly.
inline uint64_t counter_hash(uint64_t seed, uint64_t counter) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1), 53 random bits.
inline double counter_u01(uint64_t seed, uint64_t counter) {
  return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n > 0. Modulo bias is irrelevant for the small
/// n used here.
inline uint64_t counter_below(uint64_t seed, uint64_t counter, uint64_t n) {
  return counter_hash(seed, counter) % n;
}

/// Convenience stateful view over the counter stream.
struct CounterStream {
  uint64_t seed;
  uint64_t next = 0;

  explicit CounterStream(uint64_t s) : seed(s) {}
  uint64_t bits() { return counter_hash(seed, next++); }
  double u01() { return counter_u01(seed, next++); }
  uint64_t below(uint64_t n) { return counter_below(seed, next++, n); }
};

}  // namespace essclose
