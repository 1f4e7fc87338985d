#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "allocsim/bias.hpp"
#include "allocsim/limits.hpp"
#include "allocsim/mechanisms.hpp"
#include "allocsim/trials.hpp"
#include "writers.hpp"

namespace allocsim::cli {

namespace {

constexpr Mechanism kAllMechanisms[] = {Mechanism::NaiveBoston,
                                        Mechanism::AdaptiveBoston,
                                        Mechanism::SerialDictatorship};

std::vector<double> theta_grid_or_default(const RunConfig& config) {
  if (config.theta_grid.empty()) return default_theta_grid();
  validate_theta_grid(config.theta_grid);
  return config.theta_grid;
}

void check_budget(const RunConfig& config) {
  const std::uint64_t cost = static_cast<std::uint64_t>(config.n) * config.trials;
  if (!config.force && cost > 2'000'000'000ull) {
    throw BadConfig("n * trials exceeds the resource cap; pass --force to override");
  }
}

Mechanism single_mechanism(const RunConfig& config) {
  if (config.mechanisms.size() != 1) {
    throw BadConfig("this command takes exactly one --mech");
  }
  return config.mechanisms.front();
}

std::uint32_t rule_k(const ScoringRule& rule) {
  return rule.kind() == ScoringRule::Kind::KApproval ? rule.k() : 0;
}

}  // namespace

ScoringRule parse_rule(const std::string& text) {
  if (text == "borda") return ScoringRule::borda();
  if (text.rfind("approval:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(text.substr(9));
    } catch (...) {
      throw BadConfig("bad approval rule: " + text);
    }
    if (k < 1) throw BadConfig("approval rule needs k >= 1");
    return ScoringRule::k_approval(static_cast<std::uint32_t>(k));
  }
  throw BadConfig("unknown rule (expected borda or approval:k): " + text);
}

std::vector<std::filesystem::path> cmd_limits(const RunConfig& config) {
  std::vector<std::filesystem::path> files;
  switch (config.table) {
    case 1: {
      auto grid = theta_grid_or_default(config);
      TableWriter t({"theta", "r", "omega", "z", "z_prime", "f"});
      OmegaSequence w(config.r_max);
      for (double theta : grid) {
        auto st = naive_limits(theta, config.r_max);
        for (std::uint32_t r = 1; r <= config.r_max; ++r) {
          t.add_row({theta, static_cast<std::int64_t>(r), w.at(r), st.z(r),
                     st.z_prime(r), st.f(r)});
        }
      }
      files.push_back(t.write(config.out_dir, "table1", config));
      break;
    }
    case 2: {
      auto grid = theta_grid_or_default(config);
      TableWriter t({"theta", "r", "present", "y", "y_prime", "g"});
      for (double theta : grid) {
        auto st = adaptive_limits(theta, config.r_max);
        for (std::uint32_t r = 1; r <= config.r_max; ++r) {
          t.add_row({theta, static_cast<std::int64_t>(r),
                     std::exp(1.0 - static_cast<double>(r)), st.y(r), st.y_prime(r),
                     st.g(r)});
        }
      }
      files.push_back(t.write(config.out_dir, "table2", config));
      TableWriter tu({"r", "s", "u"});
      auto u = u_table(config.s_max);
      for (std::uint32_t r = 1; r <= std::min(config.r_max, config.s_max); ++r) {
        for (std::uint32_t s = r; s <= config.s_max; ++s) {
          tu.add_row({static_cast<std::int64_t>(r), static_cast<std::int64_t>(s),
                      u.at(r, s)});
        }
      }
      files.push_back(tu.write(config.out_dir, "table2_u", config));
      break;
    }
    case 3: {
      TableWriter t({"k", "nb", "ab", "sd"});
      for (std::uint32_t k : config.k_list) {
        t.add_row({static_cast<std::int64_t>(k),
                   welfare_limit_kapproval(Mechanism::NaiveBoston, k),
                   welfare_limit_kapproval(Mechanism::AdaptiveBoston, k),
                   welfare_limit_kapproval(Mechanism::SerialDictatorship, k)});
      }
      files.push_back(t.write(config.out_dir, "table3", config));
      break;
    }
    case 4: {
      TableWriter t({"k", "nb", "ab", "sd"});
      for (std::uint32_t k : config.k_list) {
        t.add_row({static_cast<std::int64_t>(k),
                   order_bias_limit_kapproval(Mechanism::NaiveBoston, k),
                   order_bias_limit_kapproval(Mechanism::AdaptiveBoston, k),
                   order_bias_limit_kapproval(Mechanism::SerialDictatorship, k)});
      }
      files.push_back(t.write(config.out_dir, "table4", config));
      break;
    }
    default:
      throw BadConfig("--table must be 1, 2, 3 or 4");
  }
  return files;
}

std::vector<std::filesystem::path> cmd_figure(const RunConfig& config) {
  std::vector<std::filesystem::path> files;
  auto uniform_grid = [] {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[i] = i / 100.0;
    return grid;
  };
  switch (config.figure) {
    case 1: {
      // surviving fraction of A_n(theta) per round, naive (z) and adaptive (y)
      TableWriter t({"theta", "series", "r", "value"});
      for (double theta : uniform_grid()) {
        auto zn = naive_limits(theta, config.fig_r_max);
        auto ya = adaptive_limits(theta, config.fig_r_max);
        for (std::uint32_t r = 1; r <= config.fig_r_max; ++r) {
          t.add_row({theta, std::string("z"), static_cast<std::int64_t>(r), zn.z(r)});
          t.add_row({theta, std::string("y"), static_cast<std::int64_t>(r), ya.y(r)});
        }
      }
      files.push_back(t.write(config.out_dir, "figure1", config));
      break;
    }
    case 2:
    case 3: {
      Mechanism mech =
          config.figure == 2 ? Mechanism::NaiveBoston : Mechanism::AdaptiveBoston;
      TableWriter t({"theta", "s", "q"});
      const std::uint32_t s_hi = config.fig_s_max;
      for (double theta : uniform_grid()) {
        auto q = q_vector(mech, s_hi, theta);
        for (std::uint32_t s = 1; s <= s_hi; ++s) {
          t.add_row({theta, static_cast<std::int64_t>(s), q[s]});
        }
      }
      files.push_back(t.write(config.out_dir,
                              config.figure == 2 ? "figure2" : "figure3", config));
      break;
    }
    case 4: {
      // round-2 bid rank of the last agent: u_{2s}, and the round-2 slice of
      // the rank-obtained limit
      TableWriter t({"s", "bid", "success"});
      auto st = adaptive_limits(1.0, 2);
      const std::uint32_t s_hi = std::max(std::max(config.fig_s_max, 2u), 20u);
      auto u = u_table(s_hi);
      for (std::uint32_t s = 2; s <= s_hi; ++s) {
        double bid = u.at(2, s);
        double success = bid * st.y_prime(2) * (1.0 - st.g(2));
        t.add_row({static_cast<std::int64_t>(s), bid, success});
      }
      files.push_back(t.write(config.out_dir, "figure4", config));
      break;
    }
    case 5: {
      TableWriter t({"k", "nb", "ab", "sd"});
      for (std::uint32_t k = 1; k <= config.k_max; ++k) {
        t.add_row({static_cast<std::int64_t>(k),
                   welfare_limit_kapproval(Mechanism::NaiveBoston, k),
                   welfare_limit_kapproval(Mechanism::AdaptiveBoston, k),
                   welfare_limit_kapproval(Mechanism::SerialDictatorship, k)});
      }
      files.push_back(t.write(config.out_dir, "figure5", config));
      break;
    }
    case 6: {
      TableWriter t({"k", "nb", "ab", "sd"});
      for (std::uint32_t k = 1; k <= config.k_max; ++k) {
        t.add_row({static_cast<std::int64_t>(k),
                   order_bias_limit_kapproval(Mechanism::NaiveBoston, k),
                   order_bias_limit_kapproval(Mechanism::AdaptiveBoston, k),
                   order_bias_limit_kapproval(Mechanism::SerialDictatorship, k)});
      }
      files.push_back(t.write(config.out_dir, "figure6", config));
      break;
    }
    default:
      throw BadConfig("--id must be between 1 and 6");
  }
  return files;
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config) {
  Mechanism mech = single_mechanism(config);
  if (config.n < 1 || config.trials < 1) {
    throw BadConfig("simulate needs n >= 1 and trials >= 1");
  }
  check_budget(config);
  auto grid = theta_grid_or_default(config);
  const ScoringRule rule = parse_rule(config.rule);
  const RngSpec rng{config.seed};
  const std::uint32_t r_hi = std::min(config.r_max, config.n);
  const std::uint32_t s_hi = std::min(config.s_max, config.n);

  struct TrialStats {
    std::vector<std::uint32_t> survivors;   // [r-1], r = 1..r_hi
    std::vector<std::uint64_t> rank_hist;   // [s], s_hi + overflow at s_hi+1
    std::vector<double> welfare;            // per theta grid point
    std::uint32_t first_rank = 0, last_rank = 0;
  };

  auto per_trial = map_trials<TrialStats>(
      mech, config.n, config.trials, rng, config.threads,
      [&](const Assignment& a) {
        TrialStats st;
        st.survivors.assign(r_hi, 0);
        st.rank_hist.assign(s_hi + 2, 0);
        for (const auto& rec : a.records) {
          for (std::uint32_t r = 1; r <= std::min(rec.exit_round, r_hi); ++r) {
            st.survivors[r - 1] += 1;
          }
          st.rank_hist[std::min(rec.rank_obtained, s_hi + 1)] += 1;
        }
        st.welfare.reserve(grid.size());
        for (double theta : grid) st.welfare.push_back(welfare_of(a, rule, theta));
        st.first_rank = a.records.front().rank_obtained;
        st.last_rank = a.records.back().rank_obtained;
        return st;
      });

  std::vector<std::filesystem::path> files;
  const double dn = static_cast<double>(config.n);
  const double dt = static_cast<double>(config.trials);

  {
    TableWriter t({"trial", "r", "fraction"});
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
      for (std::uint32_t r = 1; r <= r_hi; ++r) {
        t.add_row({static_cast<std::int64_t>(trial), static_cast<std::int64_t>(r),
                   per_trial[trial].survivors[r - 1] / dn});
      }
    }
    files.push_back(t.write(config.out_dir, "survivors_trials", config));
  }
  {
    TableWriter t({"r", "mean_fraction", "limit"});
    for (std::uint32_t r = 1; r <= r_hi; ++r) {
      double mean = 0.0;
      for (const auto& st : per_trial) mean += st.survivors[r - 1];
      mean /= dn * dt;
      double limit = mech == Mechanism::SerialDictatorship ? (r == 1 ? 1.0 : 0.0)
                     : mech == Mechanism::NaiveBoston
                         ? omega(r)
                         : std::exp(1.0 - static_cast<double>(r));
      t.add_row({static_cast<std::int64_t>(r), mean, limit});
    }
    files.push_back(t.write(config.out_dir, "survivors", config));
  }
  {
    TableWriter t({"s", "mean_fraction", "limit"});
    const std::uint32_t s_emit = std::min(s_hi, 30u);
    double limit_mass = 0.0;
    for (std::uint32_t s = 1; s <= s_emit; ++s) {
      double mean = 0.0;
      for (const auto& st : per_trial) mean += static_cast<double>(st.rank_hist[s]);
      mean /= dn * dt;
      double limit = cumulative_q(mech, s, 1.0);
      limit_mass += limit;
      t.add_row({static_cast<std::int64_t>(s), mean, limit});
    }
    double over = 0.0;
    for (const auto& st : per_trial) {
      for (std::uint32_t s = s_emit + 1; s <= s_hi + 1; ++s) {
        over += static_cast<double>(st.rank_hist[s]);
      }
    }
    // aggregate mass above s_emit; complements the emitted limit column
    t.add_row({std::string("overflow"), over / (dn * dt),
               std::max(0.0, 1.0 - limit_mass)});
    files.push_back(t.write(config.out_dir, "ranks", config));
  }
  {
    std::vector<std::string> cols = {"theta", "mean_normalized", "limit", "tail"};
    if (config.raw_totals) cols.push_back("mean_raw");
    TableWriter t(cols);
    auto curve = welfare_limit_curve(mech, rule, grid, config.s_max, 1e-9);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double mean = 0.0;
      for (const auto& st : per_trial) mean += st.welfare[i];
      mean /= dt;
      std::vector<Cell> row = {grid[i], mean / dn, curve.value[i], curve.tail[i]};
      if (config.raw_totals) row.push_back(mean);
      t.add_row(std::move(row));
    }
    files.push_back(t.write(config.out_dir, "welfare", config));
  }
  {
    // bias from the order extremes, Monte Carlo vs the asymptotic limit
    const auto u = rule.materialize(config.n);
    double u_first = 0.0, u_last = 0.0;
    for (const auto& st : per_trial) {
      u_first += st.first_rank <= config.n ? u[st.first_rank - 1] : 0.0;
      u_last += st.last_rank <= config.n ? u[st.last_rank - 1] : 0.0;
    }
    u_first /= dt;
    u_last /= dt;
    double denom = u.front() - u.back();
    double estimate = denom > 0.0 ? (u_first - u_last) / denom
                                  : std::numeric_limits<double>::quiet_NaN();
    double limit = rule.kind() == ScoringRule::Kind::Borda
                       ? order_bias_limit_borda(mech)
                       : order_bias_limit_kapproval(mech, rule_k(rule));
    TableWriter t({"rule", "estimate", "limit"});
    t.add_row({std::string(rule.name()), estimate, limit});
    files.push_back(t.write(config.out_dir, "bias", config));
  }
  return files;
}

std::vector<std::filesystem::path> cmd_converge(const RunConfig& config) {
  Mechanism mech = single_mechanism(config);
  auto grid = theta_grid_or_default(config);
  const RngSpec rng{config.seed};
  TableWriter t({"n", "stat", "median_sup_err", "mean_sup_err"});

  for (std::uint32_t n : config.n_list) {
    if (n < 1) throw BadConfig("n values must be >= 1");
    const std::uint64_t cost = static_cast<std::uint64_t>(n) * config.trials;
    if (!config.force && cost > 2'000'000'000ull) {
      throw BadConfig("n * trials exceeds the resource cap; pass --force to override");
    }
    std::vector<double> sup_errs;
    if (config.stat == "survivors") {
      const std::uint32_t r = config.stat_round;
      std::vector<double> limits;
      limits.reserve(grid.size());
      for (double theta : grid) {
        double limit = mech == Mechanism::SerialDictatorship
                           ? (r == 1 ? theta : 0.0)
                       : mech == Mechanism::NaiveBoston
                           ? naive_limits(theta, r).z(r)
                           : adaptive_limits(theta, r).y(r);
        limits.push_back(limit);
      }
      sup_errs = map_trials<double>(
          mech, n, config.trials, rng, config.threads, [&](const Assignment& a) {
            RoundTrace trace(a, grid, 1);
            double sup = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
              double frac = r <= trace.rounds()
                                ? static_cast<double>(trace.present(r, j)) / n
                                : 0.0;
              sup = std::max(sup, std::abs(frac - limits[j]));
            }
            return sup;
          });
    } else if (config.stat == "welfare") {
      const ScoringRule rule = parse_rule(config.rule);
      auto curve = welfare_limit_curve(mech, rule, grid, config.s_max, 1e-9);
      // value + tail is the exact limit for borda; tail is zero for approval
      std::vector<double> limits(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) {
        limits[j] = curve.value[j] + curve.tail[j];
      }
      sup_errs = map_trials<double>(
          mech, n, config.trials, rng, config.threads, [&](const Assignment& a) {
            double sup = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
              double w = welfare_of(a, rule, grid[j]) / n;
              sup = std::max(sup, std::abs(w - limits[j]));
            }
            return sup;
          });
    } else {
      throw BadConfig("--stat must be survivors or welfare");
    }
    std::vector<double> sorted = sup_errs;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                  static_cast<double>(sorted.size());
    t.add_row({static_cast<std::int64_t>(n), std::string(config.stat), median, mean});
  }
  return {t.write(config.out_dir, "converge", config)};
}

}  // namespace allocsim::cli
