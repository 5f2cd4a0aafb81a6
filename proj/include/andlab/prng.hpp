#pragma once

#include <cstdint>

namespace andlab {

// Counter-based generator built on the splitmix64 finalizer.  Every draw is
// a pure function of (key, counter), so streams can be split arbitrarily
// without sharing state: fields hash (seed, site), experiments hash
// (seed, trial).  Identical inputs give identical draws on every platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return mix(state += 0x9e3779b97f4a7c15ULL); }

  // uniform in [0,1) with 53 random bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Stateless hash of a (key, a, b, c) tuple; used for site-indexed fields so
// that a Bernoulli potential is extension-consistent across cube sizes.
inline std::uint64_t hash_u64(std::uint64_t key, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = SplitMix64::mix(key ^ 0x243f6a8885a308d3ULL);
  h = SplitMix64::mix(h ^ a);
  h = SplitMix64::mix(h ^ b);
  h = SplitMix64::mix(h ^ c);
  return h;
}

// Derive an independent stream for a (seed, trial) pair.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(hash_u64(seed, 0x7472696174726961ULL, trial));
}

}  // namespace andlab
