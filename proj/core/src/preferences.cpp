#include "allocsim/preferences.hpp"

#include <algorithm>

namespace allocsim {

namespace {
constexpr std::uint32_t kScanLimit = 64;
}

PreferenceSource::PreferenceSource(std::uint32_t n_items, SplitMix64 rng)
    : n_(n_items), rng_(rng) {}

void PreferenceSource::switch_to_mask() {
  mask_.assign((n_ + 63) / 64, 0);
  for (std::uint32_t item : scan_) {
    mask_[item >> 6] |= std::uint64_t{1} << (item & 63);
  }
  scan_.clear();
  scan_.shrink_to_fit();
  mode_ = Mode::Mask;
}

void PreferenceSource::switch_to_pool() {
  if (mode_ == Mode::Scan) switch_to_mask();
  pool_.reserve(n_ - consumed_count_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (!(mask_[i >> 6] & (std::uint64_t{1} << (i & 63)))) pool_.push_back(i);
  }
  mask_.clear();
  mask_.shrink_to_fit();
  mode_ = Mode::Pool;
}

std::uint32_t PreferenceSource::raw_reveal() {
  if (mode_ != Mode::Pool && consumed_count_ * 2 > n_) {
    switch_to_pool();
  } else if (mode_ == Mode::Scan && consumed_count_ >= kScanLimit) {
    switch_to_mask();
  }
  switch (mode_) {
    case Mode::Scan:
      for (;;) {
        auto item = static_cast<std::uint32_t>(rng_.below(n_));
        if (std::find(scan_.begin(), scan_.end(), item) == scan_.end()) {
          if (scan_.empty()) scan_.reserve(8);
          scan_.push_back(item);
          ++consumed_count_;
          return item;
        }
      }
    case Mode::Mask:
      for (;;) {
        auto item = static_cast<std::uint32_t>(rng_.below(n_));
        std::uint64_t bit = std::uint64_t{1} << (item & 63);
        if (!(mask_[item >> 6] & bit)) {
          mask_[item >> 6] |= bit;
          ++consumed_count_;
          return item;
        }
      }
    case Mode::Pool: {
      auto idx = static_cast<std::uint32_t>(rng_.below(pool_.size()));
      std::uint32_t item = pool_[idx];
      pool_[idx] = pool_.back();
      pool_.pop_back();
      ++consumed_count_;
      return item;
    }
  }
  throw Error("unreachable");
}

std::uint32_t PreferenceSource::reveal_next() {
  if (exhausted()) throw ExhaustedPreferences("all items consumed");
  return raw_reveal();
}

PreferenceSource::Draw PreferenceSource::reveal_next_in(
    std::span<const std::uint8_t> available) {
  std::uint32_t draws = 0;
  while (!exhausted()) {
    std::uint32_t item = raw_reveal();
    ++draws;
    if (available[item]) return {item, draws};
  }
  throw NoAvailableItem("no available item remains unconsumed");
}

std::vector<std::uint32_t> full_profile(std::uint32_t n_items, SplitMix64 rng) {
  PreferenceSource src(n_items, rng);
  std::vector<std::uint32_t> order;
  order.reserve(n_items);
  while (!src.exhausted()) order.push_back(src.reveal_next());
  return order;
}

}  // namespace allocsim
