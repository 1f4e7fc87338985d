#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "allocsim/mechanisms.hpp"
#include "allocsim/rank_distribution.hpp"
#include "allocsim/welfare.hpp"

namespace allocsim {

/// Exact serial-dictatorship rank distribution: row k is
/// C(n-s, k-s) / C(n, k-1) for s = 1..k, evaluated in log-gamma space.
RankDistribution sd_exact_matrix(std::uint32_t n);

/// Monte Carlo estimate of D(p, s) over `trials` runs. `positions` empty
/// means every position; otherwise only the listed rows are tracked (the
/// bias extremes need just {1, n}).
RankDistribution estimate_matrix(Mechanism mechanism, std::uint32_t n,
                                 std::uint64_t trials, const RngSpec& rng,
                                 std::uint32_t s_max = 200,
                                 std::span<const std::uint32_t> positions = {},
                                 unsigned threads = 1);

/// Order bias of a rank distribution under a rank-utility rule.
struct OrderBias {
  /// max_{p,q} |U(p) - U(q)| / (u(1) - u(n)); authoritative for MC matrices.
  double max_form = 0.0;
  /// (U(first) - U(last)) / (u(1) - u(n)); equals max_form for exact matrices
  /// of these mechanisms.
  double ends_form = 0.0;
  /// Bounds when some tracked row has overflow mass beyond the stored band.
  double low = 0.0;
  double high = 0.0;
  bool is_interval = false;      // overflow mass above 1e-4 on some row
  bool forms_disagree = false;   // |max - ends| beyond ~3 sigma (MC only)
};

OrderBias order_bias(const RankDistribution& dist, const ScoringRule& rule);

/// Rank distribution of the last position only: vector indexed by s with the
/// overflow mass at index s_max + 1.
std::vector<double> last_agent_distribution(Mechanism mechanism, std::uint32_t n,
                                            std::uint64_t trials, const RngSpec& rng,
                                            std::uint32_t s_max = 200,
                                            unsigned threads = 1);

}  // namespace allocsim
