#include "allocsim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace allocsim {

namespace {

constexpr std::uint32_t kAdaptiveRoundCap = 500;

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw BadTheta("theta must lie in [0,1], got " + std::to_string(theta));
  }
}

void check_round_index(std::uint32_t r) {
  if (r == 0) throw BadIndex("round index must be >= 1");
}

void check_adaptive_depth(std::uint32_t r_max) {
  // e^{r-1} is evaluated directly; cap the depth long before it can overflow.
  if (r_max > kAdaptiveRoundCap) {
    throw BadIndex("adaptive recursion depth capped at r <= 500");
  }
}

}  // namespace

double omega(std::uint32_t r) {
  check_round_index(r);
  double w = 1.0;
  for (std::uint32_t i = 1; i < r; ++i) w *= std::exp(-w);
  return w;
}

OmegaSequence::OmegaSequence(std::uint32_t r_max) {
  check_round_index(r_max);
  vals_.resize(r_max + 1);
  vals_[0] = 0.0;  // unused
  double w = 1.0;
  for (std::uint32_t r = 1; r <= r_max; ++r) {
    vals_[r] = w;
    w *= std::exp(-w);
  }
}

double OmegaSequence::at(std::uint32_t r) const {
  check_round_index(r);
  return vals_.at(r);
}

NaiveLimitState::NaiveLimitState(double theta, std::uint32_t r_max) : theta_(theta) {
  check_theta(theta);
  check_round_index(r_max);
  z_.resize(r_max + 1);
  z_prime_.resize(r_max + 1);
  f_.resize(r_max + 1);
  z_[0] = z_prime_[0] = f_[0] = 0.0;

  double w = 1.0;  // omega_r
  z_[1] = theta;
  z_prime_[1] = 1.0;
  for (std::uint32_t r = 1; r <= r_max; ++r) {
    f_[r] = 1.0 - w * std::exp(-z_[r]);
    if (r < r_max) {
      z_[r + 1] = z_[r] - (-std::expm1(-z_[r])) * w;
      z_prime_[r + 1] = z_prime_[r] * f_[r];
    }
    w *= std::exp(-w);
  }
}

NaiveLimitState naive_limits(double theta, std::uint32_t r_max) {
  return NaiveLimitState(theta, r_max);
}

AdaptiveLimitState::AdaptiveLimitState(double theta, std::uint32_t r_max)
    : theta_(theta) {
  check_theta(theta);
  check_round_index(r_max);
  check_adaptive_depth(r_max);
  y_.resize(r_max + 1);
  y_prime_.resize(r_max + 1);
  g_.resize(r_max + 1);
  y_[0] = y_prime_[0] = g_[0] = 0.0;

  y_[1] = theta;
  y_prime_[1] = 1.0;
  for (std::uint32_t r = 1; r <= r_max; ++r) {
    double scale = std::exp(static_cast<double>(r) - 1.0);  // e^{r-1}
    g_[r] = -std::expm1(-scale * y_[r]);
    if (r < r_max) {
      y_[r + 1] = y_[r] - g_[r] / scale;
      y_prime_[r + 1] = y_prime_[r] * g_[r];
    }
  }
}

AdaptiveLimitState adaptive_limits(double theta, std::uint32_t r_max) {
  return AdaptiveLimitState(theta, r_max);
}

UTable::UTable(std::uint32_t s_max) : s_max_(s_max) {
  if (s_max == 0) throw BadIndex("u_table requires s_max >= 1");
  check_adaptive_depth(s_max);
  cells_.assign(static_cast<std::size_t>(s_max_) * s_max_, 0.0);
  cells_[0] = 1.0;  // u_{11}
  for (std::uint32_t r = 2; r <= s_max_; ++r) {
    double p = std::exp(1.0 - static_cast<double>(r));
    const double* prev = cells_.data() + static_cast<std::size_t>(r - 2) * s_max_;
    double* row = cells_.data() + static_cast<std::size_t>(r - 1) * s_max_;
    for (std::uint32_t s = r; s <= s_max_; ++s) {
      row[s - 1] = p * prev[s - 2] + (1.0 - p) * row[s - 2];
    }
  }
}

double UTable::at(std::uint32_t r, std::uint32_t s) const {
  if (r == 0 || s == 0 || r > s_max_ || s > s_max_) {
    throw BadIndex("u_table index outside stored range");
  }
  if (s < r) return 0.0;
  return cells_[static_cast<std::size_t>(r - 1) * s_max_ + (s - 1)];
}

double UTable::row_sum(std::uint32_t r) const {
  if (r == 0 || r > s_max_) throw BadIndex("u_table row outside stored range");
  double sum = 0.0;
  const double* row = cells_.data() + static_cast<std::size_t>(r - 1) * s_max_;
  for (std::uint32_t s = r; s <= s_max_; ++s) sum += row[s - 1];
  return sum;
}

UTable u_table(std::uint32_t s_max) { return UTable(s_max); }

double u_row_mass(std::uint32_t r, std::uint32_t s_limit) {
  check_round_index(r);
  check_adaptive_depth(r);
  if (s_limit < r) return 0.0;
  std::vector<double> prev(s_limit + 1, 0.0), row(s_limit + 1, 0.0);
  prev[1] = 1.0;
  for (std::uint32_t i = 2; i <= r; ++i) {
    double p = std::exp(1.0 - static_cast<double>(i));
    std::fill(row.begin(), row.end(), 0.0);
    for (std::uint32_t s = i; s <= s_limit; ++s) {
      row[s] = p * prev[s - 1] + (1.0 - p) * row[s - 1];
    }
    std::swap(prev, row);
  }
  double sum = 0.0;
  for (std::uint32_t s = r; s <= s_limit; ++s) sum += prev[s];
  return sum;
}

std::vector<double> urn_pmf(std::span<const std::uint64_t> n_list) {
  if (n_list.empty()) throw BadUrnSpec("urn needs at least one ball count");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] == 0) throw BadUrnSpec("urn sizes must be positive");
    if (i > 0 && n_list[i] >= n_list[i - 1]) {
      throw BadUrnSpec("urn sizes must be strictly decreasing");
    }
  }
  const double n1 = static_cast<double>(n_list[0]);
  const std::size_t s_hi = static_cast<std::size_t>(n_list[0] - n_list.back() + 1);

  std::vector<double> cur(s_hi + 1, 0.0), next(s_hi + 1, 0.0);
  cur[1] = 1.0;  // first iteration always draws exactly one ball
  std::size_t lo = 1, hi = 1;
  for (std::size_t lvl = 2; lvl <= n_list.size(); ++lvl) {
    const double nr = static_cast<double>(n_list[lvl - 1]);
    const std::size_t hi_lvl = static_cast<std::size_t>(n_list[0] - n_list[lvl - 1] + 1);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t t = lo; t <= hi; ++t) {
      if (cur[t] == 0.0) continue;
      // P(final iteration draws m balls | t drawn so far), walked incrementally
      double run = cur[t];
      for (std::size_t s = t + 1; s <= hi_lvl; ++s) {
        next[s] += run * nr / (n1 - static_cast<double>(s) + 1.0);
        run *= 1.0 - nr / (n1 - static_cast<double>(s) + 1.0);
      }
    }
    cur.swap(next);
    lo = lvl;
    hi = hi_lvl;
  }
  cur.resize(hi + 1);
  return cur;
}

double urn_exact(std::uint64_t s, std::span<const std::uint64_t> n_list) {
  auto pmf = urn_pmf(n_list);
  if (s >= pmf.size()) return 0.0;
  return pmf[s];
}

std::vector<double> u_geometric_pmf(std::span<const double> p_list, std::uint32_t s_max) {
  if (p_list.empty()) throw BadProb("geometric limit needs at least one parameter");
  for (double p : p_list) {
    if (!(p > 0.0 && p <= 1.0)) throw BadProb("geometric parameter outside (0,1]");
  }
  std::vector<double> cur(s_max + 1, 0.0), next(s_max + 1, 0.0);
  const double p1 = p_list[0];
  double run = p1;
  for (std::uint32_t s = 1; s <= s_max; ++s) {
    cur[s] = run;
    run *= 1.0 - p1;
  }
  // convolve one geometric stage at a time (Lemma-style level recursion)
  for (std::size_t lvl = 2; lvl <= p_list.size(); ++lvl) {
    const double pr = p_list[lvl - 1];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t t = static_cast<std::uint32_t>(lvl) - 1; t <= s_max; ++t) {
      if (cur[t] == 0.0) continue;
      double term = cur[t] * pr;
      for (std::uint32_t s = t + 1; s <= s_max; ++s) {
        next[s] += term;
        term *= 1.0 - pr;
      }
    }
    cur.swap(next);
  }
  return cur;
}

double u_geometric(std::uint32_t s, std::span<const double> p_list) {
  if (s < p_list.size()) {
    // still validates the parameters
    u_geometric_pmf(p_list, 1);
    return 0.0;
  }
  return u_geometric_pmf(p_list, s)[s];
}

double q_s_nb(std::uint32_t s, double theta) {
  check_round_index(s);
  check_theta(theta);
  NaiveLimitState st(theta, s + 1);
  return st.z_prime(s) - st.z_prime(s + 1);
}

double q_s_ab(std::uint32_t s, double theta) {
  check_round_index(s);
  check_theta(theta);
  AdaptiveLimitState st(theta, s);
  UTable u(s);
  double sum = 0.0;
  for (std::uint32_t r = 1; r <= s; ++r) {
    sum += u.at(r, s) * st.y_prime(r) * (1.0 - st.g(r));
  }
  return sum;
}

double q_s_sd(std::uint32_t s, double theta) {
  check_round_index(s);
  check_theta(theta);
  if (s == 1) return 1.0 - theta;
  return std::pow(theta, static_cast<double>(s - 1)) * (1.0 - theta);
}

double q_s(Mechanism mechanism, std::uint32_t s, double theta) {
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return q_s_sd(s, theta);
    case Mechanism::NaiveBoston:
      return q_s_nb(s, theta);
    case Mechanism::AdaptiveBoston:
      return q_s_ab(s, theta);
  }
  throw Error("unknown mechanism");
}

std::vector<double> q_vector(Mechanism mechanism, std::uint32_t s_max, double theta) {
  check_round_index(s_max);
  check_theta(theta);
  std::vector<double> q(s_max + 1, 0.0);
  switch (mechanism) {
    case Mechanism::SerialDictatorship: {
      double run = 1.0 - theta;
      for (std::uint32_t s = 1; s <= s_max; ++s) {
        q[s] = run;
        run *= theta;
      }
      break;
    }
    case Mechanism::NaiveBoston: {
      NaiveLimitState st(theta, s_max + 1);
      for (std::uint32_t s = 1; s <= s_max; ++s) {
        q[s] = st.z_prime(s) - st.z_prime(s + 1);
      }
      break;
    }
    case Mechanism::AdaptiveBoston: {
      AdaptiveLimitState st(theta, s_max);
      UTable u(s_max);
      for (std::uint32_t s = 1; s <= s_max; ++s) {
        double sum = 0.0;
        for (std::uint32_t r = 1; r <= s; ++r) {
          sum += u.at(r, s) * st.y_prime(r) * (1.0 - st.g(r));
        }
        q[s] = sum;
      }
      break;
    }
  }
  return q;
}

double q_tail(Mechanism mechanism, std::uint32_t s_max, double theta) {
  check_round_index(s_max);
  check_theta(theta);
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return std::pow(theta, static_cast<double>(s_max));
    case Mechanism::NaiveBoston:
      return NaiveLimitState(theta, s_max + 1).z_prime(s_max + 1);
    case Mechanism::AdaptiveBoston: {
      // mass of ranks beyond s_max: exited agents whose bid rank overflowed
      // the table, plus agents still present after round s_max
      AdaptiveLimitState st(theta, s_max + 1);
      UTable u(s_max);
      double tail = st.y_prime(s_max + 1);
      for (std::uint32_t r = 1; r <= s_max; ++r) {
        tail += st.y_prime(r) * (1.0 - st.g(r)) * (1.0 - u.row_sum(r));
      }
      return tail;
    }
  }
  throw Error("unknown mechanism");
}

namespace {

struct SimpsonWorkspace {
  const std::function<double(double)>* f;
  double tol_scale;
};

double simpson(double fa, double fm, double fb, double h6) {
  return h6 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double h12 = (b - a) / 12.0;
  double left = simpson(fa, flm, fm, h12);
  double right = simpson(fm, frm, fb, h12);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw QuadratureFailure("adaptive Simpson did not converge");
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  if (a == b) return 0.0;
  // Pre-split into fixed panels so sharply peaked integrands (q_s is a bump
  // of width ~1/s) cannot hide between the first coarse sample points.
  constexpr int kPanels = 16;
  const double h = (b - a) / kPanels;
  const double panel_tol = tol / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    double lo = a + i * h;
    double hi = i + 1 == kPanels ? b : a + (i + 1) * h;
    double fa = f(lo);
    double fb = f(hi);
    double m = 0.5 * (lo + hi);
    double fm = f(m);
    double whole = simpson(fa, fm, fb, (hi - lo) / 6.0);
    total += adaptive_step(f, lo, hi, fa, fm, fb, whole, panel_tol, max_depth);
  }
  return total;
}

double cumulative_q(Mechanism mechanism, std::uint32_t s, double theta,
                    double quad_tol) {
  check_round_index(s);
  check_theta(theta);
  if (theta == 0.0) return 0.0;
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return integrate([s](double phi) { return q_s_sd(s, phi); }, 0.0, theta,
                       quad_tol);
    case Mechanism::NaiveBoston:
      return integrate([s](double phi) { return q_s_nb(s, phi); }, 0.0, theta,
                       quad_tol);
    case Mechanism::AdaptiveBoston: {
      UTable u(s);
      auto f = [s, &u](double phi) {
        AdaptiveLimitState st(phi, s);
        double sum = 0.0;
        for (std::uint32_t r = 1; r <= s; ++r) {
          sum += u.at(r, s) * st.y_prime(r) * (1.0 - st.g(r));
        }
        return sum;
      };
      return integrate(f, 0.0, theta, quad_tol);
    }
  }
  throw Error("unknown mechanism");
}

double welfare_limit_kapproval(Mechanism mechanism, std::uint32_t k) {
  check_round_index(k);
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return static_cast<double>(k) / (k + 1.0);
    case Mechanism::NaiveBoston:
      return 1.0 - omega(k + 1);
    case Mechanism::AdaptiveBoston: {
      UTable u(k);
      double sum = 0.0;
      for (std::uint32_t r = 1; r <= k; ++r) {
        double w = std::exp(1.0 - static_cast<double>(r));
        for (std::uint32_t s = r; s <= k; ++s) sum += w * u.at(r, s);
      }
      return (1.0 - std::exp(-1.0)) * sum;
    }
  }
  throw Error("unknown mechanism");
}

double order_bias_limit_kapproval(Mechanism mechanism, std::uint32_t k) {
  check_round_index(k);
  switch (mechanism) {
    case Mechanism::SerialDictatorship:
      return 1.0;
    case Mechanism::NaiveBoston:
      return NaiveLimitState(1.0, k + 1).z_prime(k + 1);
    case Mechanism::AdaptiveBoston: {
      UTable u(k);
      const double c = 1.0 - std::exp(-1.0);
      double sum = 0.0;
      for (std::uint32_t r = 1; r <= k; ++r) {
        double w = std::pow(c, static_cast<double>(r - 1));
        for (std::uint32_t s = r; s <= k; ++s) sum += w * u.at(r, s);
      }
      return 1.0 - std::exp(-1.0) * sum;
    }
  }
  throw Error("unknown mechanism");
}

double order_bias_limit_borda(Mechanism mechanism) {
  return mechanism == Mechanism::SerialDictatorship ? 0.5 : 0.0;
}

}  // namespace allocsim
