#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace sessrec {

// Deterministic random source. mt19937_64 output is pinned by the standard;
// the distribution helpers here are hand-rolled because std distributions
// differ between standard libraries and would break cross-platform
// reproducibility of seeded runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform draw in [0, n). n must be positive.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t r = gen_();
    while (r >= limit) r = gen_();
    return r % n;
  }

  // Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// Stateless seed derivation so that parallel work items get independent,
// reproducible streams (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sessrec
