#include "allocsim/bias.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "allocsim/trials.hpp"

namespace allocsim {

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

RankDistribution sd_exact_matrix(std::uint32_t n) {
  if (n == 0) throw EmptyInstance("rank distribution requires n >= 1");
  RankDistribution d;
  d.n = n;
  d.s_max = n;
  d.provenance = RankDistribution::Provenance::Exact;
  d.positions.resize(n);
  std::iota(d.positions.begin(), d.positions.end(), 1u);
  d.cells.assign(static_cast<std::size_t>(n) * n, 0.0);
  d.overflow.assign(n, 0.0);
  for (std::uint32_t k = 1; k <= n; ++k) {
    double log_denom = log_choose(n, k - 1.0);
    for (std::uint32_t s = 1; s <= k; ++s) {
      double log_num = log_choose(n - static_cast<double>(s), k - static_cast<double>(s));
      d.cells[static_cast<std::size_t>(k - 1) * n + (s - 1)] = std::exp(log_num - log_denom);
    }
  }
  return d;
}

RankDistribution estimate_matrix(Mechanism mechanism, std::uint32_t n,
                                 std::uint64_t trials, const RngSpec& rng,
                                 std::uint32_t s_max,
                                 std::span<const std::uint32_t> positions,
                                 unsigned threads) {
  if (n == 0) throw EmptyInstance("rank distribution requires n >= 1");
  if (trials == 0) throw Error("estimate_matrix requires trials >= 1");
  s_max = std::min(s_max, n);

  RankDistribution d;
  d.n = n;
  d.s_max = s_max;
  d.provenance = RankDistribution::Provenance::Estimated;
  d.trials = trials;
  d.seed = rng.master_seed;
  if (positions.empty()) {
    d.positions.resize(n);
    std::iota(d.positions.begin(), d.positions.end(), 1u);
  } else {
    d.positions.assign(positions.begin(), positions.end());
  }

  // row index per position, n+1 entries; n means untracked
  std::vector<std::uint32_t> row_of(n + 1, n);
  for (std::size_t i = 0; i < d.positions.size(); ++i) {
    if (d.positions[i] == 0 || d.positions[i] > n) {
      throw BadIndex("tracked position outside 1..n");
    }
    row_of[d.positions[i]] = static_cast<std::uint32_t>(i);
  }

  const std::size_t stride = s_max + 1;  // last slot counts overflow
  auto totals = count_trials(
      mechanism, n, trials, rng, threads, d.positions.size() * stride,
      [&](const Assignment& a, std::vector<std::uint64_t>& counts) {
        for (const auto& rec : a.records) {
          std::uint32_t row = row_of[rec.position];
          if (row == n) continue;
          std::size_t slot = std::min(rec.rank_obtained, s_max + 1) - 1;
          counts[row * stride + slot] += 1;
        }
      });

  d.cells.assign(d.positions.size() * s_max, 0.0);
  d.overflow.assign(d.positions.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(trials);
  for (std::size_t row = 0; row < d.positions.size(); ++row) {
    for (std::uint32_t s = 1; s <= s_max; ++s) {
      d.cells[row * s_max + (s - 1)] =
          static_cast<double>(totals[row * stride + (s - 1)]) * inv;
    }
    d.overflow[row] = static_cast<double>(totals[row * stride + s_max]) * inv;
  }
  return d;
}

OrderBias order_bias(const RankDistribution& dist, const ScoringRule& rule) {
  const auto u = rule.materialize(dist.n);
  const double u_first = u.front();
  const double u_last = u.back();
  if (!(u_first > u_last)) throw DegenerateRule("order bias needs u(1) > u(n)");
  const double denom = u_first - u_last;

  // overflow ranks lie in (s_max, n]; bound their utility by the band edges
  const double over_hi = dist.s_max < dist.n ? u[dist.s_max] : u_last;
  const double over_lo = u_last;

  const std::size_t rows = dist.positions.size();
  std::vector<double> mid(rows), lo(rows), hi(rows), var(rows, 0.0);
  for (std::size_t row = 0; row < rows; ++row) {
    double base = 0.0, second = 0.0;
    for (std::uint32_t s = 1; s <= dist.s_max; ++s) {
      double p = dist.cells[row * dist.s_max + (s - 1)];
      base += p * u[s - 1];
      second += p * u[s - 1] * u[s - 1];
    }
    double over = dist.overflow[row];
    lo[row] = base + over * over_lo;
    hi[row] = base + over * over_hi;
    mid[row] = 0.5 * (lo[row] + hi[row]);
    if (dist.trials > 0) {
      double mean = mid[row];
      var[row] = std::max(0.0, second + over * over_hi * over_hi - mean * mean) /
                 static_cast<double>(dist.trials);
    }
  }

  OrderBias out;
  auto span_of = [&](const std::vector<double>& v) {
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return (*mx - *mn) / denom;
  };
  out.max_form = span_of(mid);
  out.low = span_of(lo);
  out.high = span_of(hi);
  // widen to the loosest pairing of the per-row bounds
  {
    double max_hi = *std::max_element(hi.begin(), hi.end());
    double min_lo = *std::min_element(lo.begin(), lo.end());
    out.high = (max_hi - min_lo) / denom;
    double max_lo = *std::max_element(lo.begin(), lo.end());
    double min_hi = *std::min_element(hi.begin(), hi.end());
    out.low = std::max(0.0, (max_lo - min_hi) / denom);
  }
  double max_over = *std::max_element(dist.overflow.begin(), dist.overflow.end());
  out.is_interval = max_over > 1e-4;

  std::size_t first_row = dist.row_of(dist.positions.front());
  // ends form wants positions 1 and n when tracked; otherwise first/last rows
  std::size_t last_row = dist.row_of(dist.positions.back());
  for (std::size_t row = 0; row < rows; ++row) {
    if (dist.positions[row] == 1) first_row = row;
    if (dist.positions[row] == dist.n) last_row = row;
  }
  out.ends_form = (mid[first_row] - mid[last_row]) / denom;

  if (dist.provenance == RankDistribution::Provenance::Estimated && dist.trials > 0) {
    double se = std::sqrt((*std::max_element(var.begin(), var.end())) * 2.0) / denom;
    out.forms_disagree = std::abs(out.max_form - out.ends_form) > 3.0 * se;
  }
  return out;
}

std::vector<double> last_agent_distribution(Mechanism mechanism, std::uint32_t n,
                                            std::uint64_t trials, const RngSpec& rng,
                                            std::uint32_t s_max, unsigned threads) {
  if (n == 0) throw EmptyInstance("rank distribution requires n >= 1");
  s_max = std::min(s_max, n);
  auto counts = count_trials(
      mechanism, n, trials, rng, threads, s_max + 2,
      [n, s_max](const Assignment& a, std::vector<std::uint64_t>& c) {
        c[std::min(a.records[n - 1].rank_obtained, s_max + 1)] += 1;
      });
  std::vector<double> pmf(s_max + 2, 0.0);
  const double inv = 1.0 / static_cast<double>(trials);
  for (std::uint32_t s = 1; s <= s_max + 1; ++s) {
    pmf[s] = static_cast<double>(counts[s]) * inv;
  }
  return pmf;
}

}  // namespace allocsim
