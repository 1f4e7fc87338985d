#include "allocsim/mechanisms.hpp"

#include <algorithm>
#include <cmath>

namespace allocsim {

namespace {

Assignment make_assignment(Mechanism mech, std::uint32_t n, const RngSpec& rng,
                           std::uint64_t trial) {
  if (n == 0) throw EmptyInstance("mechanism requires n >= 1");
  Assignment a;
  a.mechanism = mech;
  a.n = n;
  a.master_seed = rng.master_seed;
  a.trial = trial;
  a.records.resize(n);
  return a;
}

struct LoggedBid {
  std::uint32_t agent;
  BidRecord bid;
};

// The engines log bids in round order; regroup them into per-agent slices.
void finalize_bids(Assignment& a, const std::vector<LoggedBid>& log) {
  std::uint32_t begin = 0;
  for (std::uint32_t i = 0; i < a.n; ++i) {
    a.records[i].bid_begin = begin;
    begin += a.records[i].bid_count;
  }
  a.bids.resize(log.size());
  std::vector<std::uint32_t> next(a.n);
  for (std::uint32_t i = 0; i < a.n; ++i) next[i] = a.records[i].bid_begin;
  for (const auto& entry : log) {
    a.bids[next[entry.agent]++] = entry.bid;
  }
}

}  // namespace

Assignment run_sd(std::uint32_t n, const RngSpec& rng, std::uint64_t trial) {
  Assignment a = make_assignment(Mechanism::SerialDictatorship, n, rng, trial);
  std::uint64_t trial_seed = derive_stream(rng.master_seed, trial);
  std::vector<std::uint8_t> available(n, 1);
  for (std::uint32_t k = 0; k < n; ++k) {
    PreferenceSource src(n, SplitMix64(derive_stream(trial_seed, k)));
    auto [item, draws] = src.reveal_next_in(available);
    available[item] = 0;
    a.records[k] = {k + 1, item, 1, draws, static_cast<std::uint32_t>(a.bids.size()), 1};
    a.bids.push_back({1, draws, true});
  }
  return a;
}

Assignment run_nb(std::uint32_t n, const RngSpec& rng, std::uint64_t trial) {
  Assignment a = make_assignment(Mechanism::NaiveBoston, n, rng, trial);
  std::uint64_t trial_seed = derive_stream(rng.master_seed, trial);

  std::vector<PreferenceSource> sources;
  sources.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    sources.emplace_back(n, SplitMix64(derive_stream(trial_seed, k)));
  }

  std::vector<LoggedBid> log;
  log.reserve(2 * static_cast<std::size_t>(n));
  std::vector<std::uint32_t> active(n);
  for (std::uint32_t k = 0; k < n; ++k) active[k] = k;
  std::vector<std::uint8_t> available(n, 1);

  std::uint32_t round = 0;
  std::vector<std::uint32_t> next_active;
  while (!active.empty()) {
    ++round;
    if (round > n) throw Error("naive boston: agent survived past round n");
    next_active.clear();
    // Active agents are scanned in tiebreak order; claiming an item as soon
    // as its first bidder appears matches the simultaneous resolution, since
    // a later bid on the same item fails either way.
    for (std::uint32_t k : active) {
      std::uint32_t item = sources[k].reveal_next();
      bool win = available[item] != 0;
      log.push_back({k, {round, round, win}});
      if (win) {
        available[item] = 0;
        a.records[k].position = k + 1;
        a.records[k].item = item;
        a.records[k].exit_round = round;
        a.records[k].rank_obtained = round;
        a.records[k].bid_count = round;
      } else {
        next_active.push_back(k);
      }
    }
    active.swap(next_active);
  }
  finalize_bids(a, log);
  return a;
}

Assignment run_ab(std::uint32_t n, const RngSpec& rng, std::uint64_t trial) {
  Assignment a = make_assignment(Mechanism::AdaptiveBoston, n, rng, trial);
  std::uint64_t trial_seed = derive_stream(rng.master_seed, trial);

  std::vector<PreferenceSource> sources;
  sources.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    sources.emplace_back(n, SplitMix64(derive_stream(trial_seed, k)));
  }

  std::vector<LoggedBid> log;
  log.reserve(2 * static_cast<std::size_t>(n));
  std::vector<std::uint32_t> active(n);
  for (std::uint32_t k = 0; k < n; ++k) active[k] = k;
  std::vector<std::uint32_t> rank_so_far(n, 0);  // F_{a,r}: items revealed so far
  std::vector<std::uint8_t> available(n, 1);
  // first bidder per item this round; n means unclaimed
  std::vector<std::uint32_t> claimant(n, n);

  std::vector<std::uint32_t> bid_item(n);
  std::vector<std::uint32_t> next_active;
  std::uint32_t round = 0;
  while (!active.empty()) {
    ++round;
    if (round > n) throw Error("adaptive boston: agent survived past round n");
    // Phase 1: everyone bids against the availability at round start.
    for (std::uint32_t k : active) {
      auto [item, draws] = sources[k].reveal_next_in(available);
      rank_so_far[k] += draws;
      bid_item[k] = item;
      if (claimant[item] == n) claimant[item] = k;
    }
    // Phase 2: every bid item goes to its earliest bidder.
    next_active.clear();
    for (std::uint32_t k : active) {
      std::uint32_t item = bid_item[k];
      bool win = claimant[item] == k;
      log.push_back({k, {round, rank_so_far[k], win}});
      if (win) {
        a.records[k].position = k + 1;
        a.records[k].item = item;
        a.records[k].exit_round = round;
        a.records[k].rank_obtained = rank_so_far[k];
        a.records[k].bid_count = round;
      } else {
        next_active.push_back(k);
      }
    }
    for (std::uint32_t k : active) {
      available[bid_item[k]] = 0;
      claimant[bid_item[k]] = n;
    }
    active.swap(next_active);
  }
  finalize_bids(a, log);
  return a;
}

Assignment run(Mechanism mechanism, std::uint32_t n, const RngSpec& rng,
               std::uint64_t trial) {
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return run_sd(n, rng, trial);
    case Mechanism::NaiveBoston:
      return run_nb(n, rng, trial);
    case Mechanism::AdaptiveBoston:
      return run_ab(n, rng, trial);
  }
  throw Error("unknown mechanism");
}

void validate_theta_grid(std::span<const double> grid) {
  double prev = 0.0;
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw BadThetaGrid("theta outside [0,1]");
    if (t < prev) throw BadThetaGrid("theta grid not sorted");
    prev = t;
  }
}

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  grid.reserve(21);
  for (int i = 0; i <= 20; ++i) grid.push_back(i * 0.05);
  return grid;
}

RoundTrace::RoundTrace(const Assignment& a, std::vector<double> theta_grid,
                       std::uint32_t s_cap)
    : theta_grid_(std::move(theta_grid)), n_(a.n), s_cap_(s_cap) {
  validate_theta_grid(theta_grid_);
  for (const auto& rec : a.records) rounds_ = std::max(rounds_, rec.exit_round);

  const std::size_t g = theta_grid_.size();
  // cutoff[j] = floor(n * theta_j): last position inside A_n(theta_j)
  std::vector<std::uint32_t> cutoff(g);
  for (std::size_t j = 0; j < g; ++j) {
    cutoff[j] = static_cast<std::uint32_t>(std::floor(n_ * theta_grid_[j]));
  }

  present_.assign(rounds_, 0);
  present_theta_.assign(rounds_ * g, 0);
  bids_.assign(static_cast<std::size_t>(rounds_) * (s_cap_ + 1) * g, 0);
  successes_.assign(bids_.size(), 0);

  for (const auto& rec : a.records) {
    // first grid slot whose segment contains this position
    std::size_t j0 = g;
    for (std::size_t j = 0; j < g; ++j) {
      if (cutoff[j] >= rec.position) {
        j0 = j;
        break;
      }
    }
    for (std::uint32_t r = 1; r <= rec.exit_round; ++r) {
      present_[r - 1] += 1;
      if (j0 < g) present_theta_[(r - 1) * g + j0] += 1;
    }
    if (j0 == g) continue;
    for (std::uint32_t b = 0; b < rec.bid_count; ++b) {
      // bids are stored per agent; look them up through the flat slice
      // (records and bids belong to the same assignment)
      const BidRecord& bid = a.bids[rec.bid_begin + b];
      std::uint32_t s = std::min(bid.rank, s_cap_ + 1);
      std::size_t idx = cell(bid.round, s, j0);
      bids_[idx] += 1;
      if (bid.success) successes_[idx] += 1;
    }
  }
  // accumulate grid slots so slot j counts every position <= cutoff[j]
  for (std::uint32_t r = 0; r < rounds_; ++r) {
    for (std::size_t j = 1; j < g; ++j) {
      present_theta_[r * g + j] += present_theta_[r * g + j - 1];
    }
    for (std::uint32_t s = 0; s <= s_cap_; ++s) {
      for (std::size_t j = 1; j < g; ++j) {
        std::size_t base = (static_cast<std::size_t>(r) * (s_cap_ + 1) + s) * g;
        bids_[base + j] += bids_[base + j - 1];
        successes_[base + j] += successes_[base + j - 1];
      }
    }
  }
}

std::size_t RoundTrace::cell(std::uint32_t r, std::uint32_t s, std::size_t j) const {
  return (static_cast<std::size_t>(r - 1) * (s_cap_ + 1) + (s - 1)) * theta_grid_.size() + j;
}

std::uint32_t RoundTrace::present(std::uint32_t r) const { return present_.at(r - 1); }

std::uint32_t RoundTrace::present(std::uint32_t r, std::size_t j) const {
  return present_theta_.at((r - 1) * theta_grid_.size() + j);
}

std::uint32_t RoundTrace::bids(std::uint32_t r, std::uint32_t s, std::size_t j) const {
  return bids_.at(cell(r, s, j));
}

std::uint32_t RoundTrace::successes(std::uint32_t r, std::uint32_t s, std::size_t j) const {
  return successes_.at(cell(r, s, j));
}

std::uint32_t RoundTrace::failures(std::uint32_t r, std::uint32_t s, std::size_t j) const {
  std::size_t idx = cell(r, s, j);
  return bids_.at(idx) - successes_.at(idx);
}

std::pair<Assignment, RoundTrace> run_with_trace(Mechanism mechanism, std::uint32_t n,
                                                 const RngSpec& rng,
                                                 std::vector<double> theta_grid,
                                                 std::uint64_t trial,
                                                 std::uint32_t s_cap) {
  validate_theta_grid(theta_grid);
  Assignment a = run(mechanism, n, rng, trial);
  RoundTrace trace(a, std::move(theta_grid), s_cap);
  return {std::move(a), std::move(trace)};
}

}  // namespace allocsim
