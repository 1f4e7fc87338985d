#pragma once

#include <cstdint>

namespace allocsim {

/// Seed configuration for a batch of simulations.
///
/// Stream derivation rule (stable across versions): the stream for agent a in
/// trial t is a SplitMix64 generator seeded with
///     derive_stream(derive_stream(master_seed, t), a)
/// where derive_stream(s, i) = mix64(s + (i + 1) * 0x9e3779b97f4a7c15).
/// Identical (seed, n, mechanism, trial) inputs therefore reproduce
/// bit-identical outcome records regardless of evaluation order.
struct RngSpec {
  std::uint64_t master_seed = 0;
};

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// SplitMix64 finalizer (Stafford mix 13).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return detail::mix64(seed + (index + 1) * detail::kGolden);
}

/// Small, fast 64-bit generator (SplitMix64). One instance per agent; never
/// shared across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += detail::kGolden);
    return detail::mix64(z);
  }

  /// Uniform integer in [0, bound), bound >= 1. Lemire reduction with
  /// rejection, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline SplitMix64 agent_stream(const RngSpec& rng, std::uint64_t trial,
                               std::uint64_t agent_index) {
  return SplitMix64(derive_stream(derive_stream(rng.master_seed, trial), agent_index));
}

}  // namespace allocsim
