#pragma once

#include <cstdint>

namespace lipmod {

// splitmix64. Small, fast, and easy to fork into independent substreams:
// sample k of a sweep uses substream(seed, k), so results do not depend on
// thread count or scheduling order.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n); n must be small relative to 2^64
  int uniform_int(int n) {
    return static_cast<int>(next() % static_cast<std::uint64_t>(n));
  }
};

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 m(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  m.next();
  return m.next();
}

}  // namespace lipmod
