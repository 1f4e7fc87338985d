#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "allocsim/errors.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

/// Lazily generated Impartial Culture preference order for one agent.
///
/// Items are revealed one at a time; each reveal is uniform over the items not
/// yet consumed (sampling without replacement), so any prefix of reveals is a
/// uniform partial permutation. Only the prefix a mechanism actually needs is
/// ever generated.
///
/// Single-owner mutable state: distinct sources may be used from distinct
/// threads, but a given source must not be shared.
class PreferenceSource {
 public:
  PreferenceSource(std::uint32_t n_items, SplitMix64 rng);

  std::uint32_t n_items() const { return n_; }
  std::uint32_t consumed_count() const { return consumed_count_; }
  bool exhausted() const { return consumed_count_ == n_; }

  /// Reveals the next item of the preference order.
  /// Throws ExhaustedPreferences when all items have been consumed.
  std::uint32_t reveal_next();

  struct Draw {
    std::uint32_t item;
    std::uint32_t draws;  // items sampled, including the returned one
  };

  /// Keeps revealing until an item with available[item] != 0 comes up, and
  /// returns it together with the number of items sampled. All sampled items
  /// (available or not) are consumed. Throws NoAvailableItem when no
  /// available item remains unconsumed.
  Draw reveal_next_in(std::span<const std::uint8_t> available);

 private:
  std::uint32_t raw_reveal();
  void switch_to_mask();
  void switch_to_pool();

  // Sparse phase: rejection sampling, with membership checked by a linear
  // scan while the consumed set is tiny and by a bitmask after that. Once
  // more than half the items are consumed, the complement is materialized
  // and consumed by partial Fisher-Yates. The revealed sequence follows the
  // same law in every phase.
  enum class Mode { Scan, Mask, Pool };

  std::uint32_t n_;
  std::uint32_t consumed_count_ = 0;
  SplitMix64 rng_;
  Mode mode_ = Mode::Scan;
  std::vector<std::uint32_t> scan_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint32_t> pool_;
};

/// Full preference order for one agent stream; intended for small-n
/// brute-force work where a whole profile is convenient.
std::vector<std::uint32_t> full_profile(std::uint32_t n_items, SplitMix64 rng);

}  // namespace allocsim
