#include "allocsim/brute_force.hpp"

#include <numeric>
#include <vector>

namespace allocsim {

namespace {

constexpr std::uint32_t kBruteForceCap = 6;

// Matrix accumulator: D[(p-1)*n + (s-1)] += path probability on match.
struct Accum {
  std::uint32_t n;
  std::vector<double> d;
  explicit Accum(std::uint32_t n_) : n(n_), d(static_cast<std::size_t>(n_) * n_, 0.0) {}
  void add(std::uint32_t position, std::uint32_t rank, double prob) {
    d[static_cast<std::size_t>(position - 1) * n + (rank - 1)] += prob;
  }
};

// Serial dictatorship: agent k faces A = n-k+1 available items and reveals
// until one comes up, so P(rank = m) is a product of miss probabilities.
void sd_enumerate(std::uint32_t n, Accum& acc) {
  for (std::uint32_t k = 1; k <= n; ++k) {
    std::uint32_t avail = n - k + 1;
    double run = 1.0;
    for (std::uint32_t m = 1; m + avail <= n + 1; ++m) {
      double hit = static_cast<double>(avail) / (n - m + 1);
      acc.add(k, m, run * hit);
      run *= 1.0 - hit;
    }
  }
}

// Naive Boston. Available items are exchangeable (no remaining agent has
// consumed an available item), so a bid branches over A labelled available
// slots plus one merged "unavailable" option; only the counts matter.
// Each round owns its choice buffer: the next-round recursion must not
// clobber the combination still being enumerated.
struct NbEnumerator {
  std::uint32_t n;
  Accum& acc;

  NbEnumerator(std::uint32_t n_, Accum& acc_) : n(n_), acc(acc_) {}

  void round(std::uint32_t r, const std::vector<std::uint32_t>& active, double prob) {
    if (active.empty()) return;
    std::vector<std::uint32_t> choice(active.size());
    pick(r, active, choice, 0, prob);
  }

  void pick(std::uint32_t r, const std::vector<std::uint32_t>& active,
            std::vector<std::uint32_t>& choice, std::size_t idx, double prob) {
    const auto avail = static_cast<std::uint32_t>(active.size());
    if (idx == active.size()) {
      resolve(r, active, choice, prob);
      return;
    }
    const std::uint32_t pool = n - r + 1;  // unconsumed items per agent
    const double p_slot = 1.0 / pool;
    for (std::uint32_t slot = 0; slot < avail; ++slot) {
      choice[idx] = slot;
      pick(r, active, choice, idx + 1, prob * p_slot);
    }
    if (pool > avail) {
      choice[idx] = avail;
      pick(r, active, choice, idx + 1, prob * (static_cast<double>(pool - avail) / pool));
    }
  }

  void resolve(std::uint32_t r, const std::vector<std::uint32_t>& active,
               const std::vector<std::uint32_t>& choice, double prob) {
    const auto avail = static_cast<std::uint32_t>(active.size());
    std::vector<bool> claimed(avail, false);
    std::vector<std::uint32_t> losers;
    for (std::size_t i = 0; i < active.size(); ++i) {
      std::uint32_t slot = choice[i];
      if (slot < avail && !claimed[slot]) {
        claimed[slot] = true;
        acc.add(active[i], r, prob);
      } else {
        losers.push_back(active[i]);
      }
    }
    round(r + 1, losers, prob);
  }
};

// Adaptive Boston. Each bid wastes j unconsumed-unavailable reveals before
// hitting one of the A available slots; wasted items never matter again, so
// the branch is (j, slot) with a running product for the miss probabilities.
// consumed[i] doubles as the agent's current preference depth F_{a,r-1}.
struct AbEnumerator {
  std::uint32_t n;
  Accum& acc;

  AbEnumerator(std::uint32_t n_, Accum& acc_) : n(n_), acc(acc_) {}

  struct Choice {
    std::uint32_t slot;
    std::uint32_t waste;
  };

  void round(std::uint32_t r, const std::vector<std::uint32_t>& active,
             const std::vector<std::uint32_t>& consumed, double prob) {
    if (active.empty()) return;
    std::vector<Choice> choice(active.size());
    pick(r, active, consumed, choice, 0, prob);
  }

  void pick(std::uint32_t r, const std::vector<std::uint32_t>& active,
            const std::vector<std::uint32_t>& consumed, std::vector<Choice>& choice,
            std::size_t idx, double prob) {
    const auto avail = static_cast<std::uint32_t>(active.size());
    if (idx == active.size()) {
      resolve(r, active, consumed, choice, prob);
      return;
    }
    const std::uint32_t pool = n - consumed[idx];
    double run = 1.0;  // probability of j initial misses
    for (std::uint32_t j = 0; j + avail <= pool; ++j) {
      double hit = run / (pool - j);  // one specific available item
      for (std::uint32_t slot = 0; slot < avail; ++slot) {
        choice[idx] = {slot, j};
        pick(r, active, consumed, choice, idx + 1, prob * hit);
      }
      run *= static_cast<double>(pool - avail - j) / (pool - j);
    }
  }

  void resolve(std::uint32_t r, const std::vector<std::uint32_t>& active,
               const std::vector<std::uint32_t>& consumed,
               const std::vector<Choice>& choice, double prob) {
    const auto avail = static_cast<std::uint32_t>(active.size());
    std::vector<bool> claimed(avail, false);
    std::vector<std::uint32_t> losers, losers_consumed;
    for (std::size_t i = 0; i < active.size(); ++i) {
      std::uint32_t depth = consumed[i] + choice[i].waste + 1;
      if (!claimed[choice[i].slot]) {
        claimed[choice[i].slot] = true;
        acc.add(active[i], depth, prob);
      } else {
        losers.push_back(active[i]);
        losers_consumed.push_back(depth);
      }
    }
    round(r + 1, losers, losers_consumed, prob);
  }
};

}  // namespace

RankDistribution brute_force_distribution(Mechanism mechanism, std::uint32_t n) {
  if (n == 0) throw EmptyInstance("brute force requires n >= 1");
  if (n > kBruteForceCap) {
    throw OracleTooLarge("brute force enumeration capped at n <= 6");
  }
  Accum acc(n);
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      sd_enumerate(n, acc);
      break;
    case Mechanism::NaiveBoston: {
      NbEnumerator en(n, acc);
      std::vector<std::uint32_t> all(n);
      std::iota(all.begin(), all.end(), 1u);
      en.round(1, all, 1.0);
      break;
    }
    case Mechanism::AdaptiveBoston: {
      AbEnumerator en(n, acc);
      std::vector<std::uint32_t> all(n);
      std::iota(all.begin(), all.end(), 1u);
      en.round(1, all, std::vector<std::uint32_t>(n, 0), 1.0);
      break;
    }
  }
  RankDistribution d;
  d.n = n;
  d.s_max = n;
  d.provenance = RankDistribution::Provenance::Exact;
  d.positions.resize(n);
  std::iota(d.positions.begin(), d.positions.end(), 1u);
  d.cells = std::move(acc.d);
  d.overflow.assign(n, 0.0);
  return d;
}

}  // namespace allocsim
