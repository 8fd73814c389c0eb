#pragma once

// Deterministic, splittable random numbers. Everything randomized in the
// library draws from one of these so results depend only on the configured
// 64-bit seed, not on platform or thread count.

#include <cstdint>
#include <string_view>

namespace cch {

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Uniform double in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Child stream derived from a tag; independent of draws made on the parent.
  SplitMix64 split(std::string_view tag) const {
    return SplitMix64(fnv1a64(tag, state ^ 0x5851f42d4c957f2dull));
  }
};

}  // namespace cch
