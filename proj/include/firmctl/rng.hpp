// Deterministic random number generation.
//
// The standard <random> distributions are implementation-defined, so runs
// would not be byte-identical across toolchains. Everything here is fully
// specified: splitmix64 streams plus rejection-sampled bounded draws.

#pragma once

#include <cmath>
#include <cstdint>

namespace firmctl {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Stafford mix13)
inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a base seed and two salts.
// Used to give each (fraction, sample) clip draw its own stream so that
// parallel and serial execution produce identical results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                                 std::uint64_t salt_b = 0) {
  std::uint64_t h = mix64(base + kGolden);
  h = mix64(h ^ (salt_a + kGolden));
  h = mix64(h ^ (salt_b + kGolden));
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 significant bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a Pareto inversion argument.
  double unit_pos() { return 1.0 - unit(); }

  // Standard normal via Box-Muller (fully specified, unlike
  // std::normal_distribution).
  double gaussian() {
    const double u1 = unit_pos();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace firmctl
