#pragma once

#include <cstdint>

namespace tvg {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/**
 * Counter-based generator.
 *
 * Every draw is a pure function of (seed, stream, lane, step): the key is
 * derived by chaining SplitMix64 over the tuple. Simulations use
 * stream = trial index, lane = edge index and step = slot, so each
 * (edge, trial) pair reads its own sequence and results do not depend on
 * evaluation order or thread count.
 */
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t lane, std::uint64_t step) const noexcept {
    return splitmix64(splitmix64(key_ ^ (lane * 0xA0761D6478BD642FULL)) ^
                      (step * 0xE7037ED1A0B428DBULL));
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform(std::uint64_t lane, std::uint64_t step) const noexcept {
    return static_cast<double>(bits(lane, step) >> 11) * 0x1.0p-53;
  }

  /// True with probability p; p >= 1 is always true and p <= 0 never.
  constexpr bool bernoulli(double p, std::uint64_t lane, std::uint64_t step) const noexcept {
    return uniform(lane, step) < p;
  }

 private:
  std::uint64_t key_;
};

}  // namespace tvg
