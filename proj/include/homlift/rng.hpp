#pragma once

#include <cstdint>

namespace homlift {

/// SplitMix64: a 64-bit counter-based generator (Steele, Lea & Flood 2014).
/// The state advances by a fixed odd constant and the output is a finalizer of
/// the counter, so the k-th draw after seeding is a pure function of
/// (seed, k). Every sampled artifact in this library is pinned to this exact
/// update rule; replacing it changes file-level outputs.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }
};

/// Name recorded in run metadata so outputs are reproducible across
/// implementations that honor the same contract.
inline const char* rng_algorithm_name() { return "splitmix64"; }

}  // namespace homlift
