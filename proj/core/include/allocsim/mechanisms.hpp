#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "allocsim/mechanism.hpp"
#include "allocsim/preferences.hpp"
#include "allocsim/rng.hpp"

namespace allocsim {

struct BidRecord {
  std::uint32_t round;
  std::uint32_t rank;  // preference rank of the item bid for
  bool success;
};

struct OutcomeRecord {
  std::uint32_t position;       // 1..n, position in the tiebreak order
  std::uint32_t item;           // matched item id (0-based)
  std::uint32_t exit_round;     // R; recorded as 1 for serial dictatorship
  std::uint32_t rank_obtained;  // S; rank of the matched item in the agent's order
  std::uint32_t bid_begin;      // index into Assignment::bids
  std::uint32_t bid_count;
};

/// A perfect matching of n agents to n items plus per-agent outcome records.
struct Assignment {
  Mechanism mechanism{};
  std::uint32_t n = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
  std::vector<OutcomeRecord> records;  // indexed by position - 1
  std::vector<BidRecord> bids;         // flat storage, per-record slices

  std::span<const BidRecord> bids_for(const OutcomeRecord& rec) const {
    return {bids.data() + rec.bid_begin, rec.bid_count};
  }
};

Assignment run_sd(std::uint32_t n, const RngSpec& rng, std::uint64_t trial = 0);
Assignment run_nb(std::uint32_t n, const RngSpec& rng, std::uint64_t trial = 0);
Assignment run_ab(std::uint32_t n, const RngSpec& rng, std::uint64_t trial = 0);
Assignment run(Mechanism mechanism, std::uint32_t n, const RngSpec& rng,
               std::uint64_t trial = 0);

/// Per-round counts recomputed from an Assignment's outcome records.
///
/// Ranks above s_cap are folded into the overflow slot s_cap + 1, so
/// bids(r, s, j) over s in 1..s_cap+1 always totals successes + failures.
class RoundTrace {
 public:
  RoundTrace(const Assignment& a, std::vector<double> theta_grid,
             std::uint32_t s_cap);

  std::uint32_t rounds() const { return rounds_; }
  std::uint32_t s_cap() const { return s_cap_; }
  const std::vector<double>& theta_grid() const { return theta_grid_; }

  /// N_n(r): agents (and items) present at the start of round r.
  std::uint32_t present(std::uint32_t r) const;
  /// N_n(r, theta_grid[j]): members of A_n(theta) present at round r.
  std::uint32_t present(std::uint32_t r, std::size_t j) const;
  /// N_n(r, s, theta): members of A_n(theta) bidding their s-th preference
  /// at round r (s = s_cap + 1 is the overflow slot).
  std::uint32_t bids(std::uint32_t r, std::uint32_t s, std::size_t j) const;
  std::uint32_t successes(std::uint32_t r, std::uint32_t s, std::size_t j) const;
  std::uint32_t failures(std::uint32_t r, std::uint32_t s, std::size_t j) const;

 private:
  std::size_t cell(std::uint32_t r, std::uint32_t s, std::size_t j) const;

  std::vector<double> theta_grid_;
  std::uint32_t n_ = 0;
  std::uint32_t rounds_ = 0;
  std::uint32_t s_cap_ = 0;
  std::vector<std::uint32_t> present_;        // [r-1]
  std::vector<std::uint32_t> present_theta_;  // [(r-1)*G + j]
  std::vector<std::uint32_t> bids_;           // [(r-1)*(s_cap+1)*G + (s-1)*G + j]
  std::vector<std::uint32_t> successes_;
};

std::pair<Assignment, RoundTrace> run_with_trace(Mechanism mechanism,
                                                 std::uint32_t n,
                                                 const RngSpec& rng,
                                                 std::vector<double> theta_grid,
                                                 std::uint64_t trial = 0,
                                                 std::uint32_t s_cap = 64);

/// {0, 0.05, 0.10, ..., 1.00}.
std::vector<double> default_theta_grid();

void validate_theta_grid(std::span<const double> grid);

}  // namespace allocsim
