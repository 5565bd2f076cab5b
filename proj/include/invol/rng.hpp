#pragma once

#include <cstdint>
#include <random>

namespace invol {

/// Deterministic PRNG. Streams are derived from (seed, stream, index) so
/// instances can run in any order and still draw identical randomness.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  /// Derives an independent stream. The mixing is splitmix64, fixed for
  /// reproducibility across platforms and versions.
  static Rng derive(uint64_t seed, uint64_t stream, uint64_t index) {
    uint64_t x = mix(mix(mix(seed) ^ stream) ^ index);
    return Rng(x);
  }

  uint64_t next_u64() { return eng_(); }

  /// Uniform-ish draw in [0, n). n must be nonzero. The slight modulo bias
  /// is irrelevant for search sampling and keeps the draw reproducible.
  uint64_t below(uint64_t n) { return eng_() % n; }

 private:
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 eng_;
};

}  // namespace invol
