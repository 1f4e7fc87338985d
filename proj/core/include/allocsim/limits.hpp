#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "allocsim/errors.hpp"
#include "allocsim/mechanism.hpp"

namespace allocsim {

/// omega_1 = 1, omega_{r+1} = omega_r * exp(-omega_r): the limiting fraction
/// of agents present at round r of Naive Boston.
double omega(std::uint32_t r);

/// Memoized prefix of the omega sequence; read-only after construction.
class OmegaSequence {
 public:
  explicit OmegaSequence(std::uint32_t r_max);
  double at(std::uint32_t r) const;
  std::uint32_t size() const { return static_cast<std::uint32_t>(vals_.size() - 1); }

 private:
  std::vector<double> vals_;  // [1..r_max]
};

/// z_r(theta), z'_r(theta), f_r(theta) for r = 1..r_max at a fixed theta.
///
/// z_1 = theta, z_{r+1} = z_r - (1 - exp(-z_r)) omega_r,
/// f_r = 1 - omega_r exp(-z_r), z'_{r+1} = z'_r f_r with z'_1 = 1.
class NaiveLimitState {
 public:
  NaiveLimitState(double theta, std::uint32_t r_max);
  double theta() const { return theta_; }
  std::uint32_t rounds() const { return static_cast<std::uint32_t>(z_.size() - 1); }
  double z(std::uint32_t r) const { return z_.at(r); }
  double z_prime(std::uint32_t r) const { return z_prime_.at(r); }
  double f(std::uint32_t r) const { return f_.at(r); }

 private:
  double theta_;
  std::vector<double> z_, z_prime_, f_;
};

NaiveLimitState naive_limits(double theta, std::uint32_t r_max);

/// y_r(theta), y'_r(theta), g_r(theta) for r = 1..r_max at a fixed theta.
///
/// y_1 = theta, y_{r+1} = y_r - e^{1-r} (1 - exp(-e^{r-1} y_r)),
/// g_r = 1 - exp(-e^{r-1} y_r), y'_{r+1} = y'_r g_r with y'_1 = 1.
/// g is evaluated through expm1 so small arguments do not cancel.
class AdaptiveLimitState {
 public:
  AdaptiveLimitState(double theta, std::uint32_t r_max);
  double theta() const { return theta_; }
  std::uint32_t rounds() const { return static_cast<std::uint32_t>(y_.size() - 1); }
  double y(std::uint32_t r) const { return y_.at(r); }
  double y_prime(std::uint32_t r) const { return y_prime_.at(r); }
  double g(std::uint32_t r) const { return g_.at(r); }

 private:
  double theta_;
  std::vector<double> y_, y_prime_, g_;
};

AdaptiveLimitState adaptive_limits(double theta, std::uint32_t r_max);

/// u_{rs}: limiting probability that an Adaptive Boston agent present at
/// round r bids for his s-th preference. Three-term recurrence
/// u_{rs} = e^{1-r} u_{r-1,s-1} + (1 - e^{1-r}) u_{r,s-1}, u_{11} = 1.
class UTable {
 public:
  explicit UTable(std::uint32_t s_max);
  std::uint32_t s_max() const { return s_max_; }
  /// u_{rs}; zero for s < r. Throws BadIndex outside 1..s_max.
  double at(std::uint32_t r, std::uint32_t s) const;
  /// Truncated row sum over s = r..s_max.
  double row_sum(std::uint32_t r) const;

 private:
  std::uint32_t s_max_;
  std::vector<double> cells_;  // (r-1)*s_max + (s-1)
};

UTable u_table(std::uint32_t s_max);

/// Truncated row sum of u_{rs} over s = r..s_limit, computed with two rolling
/// rows so s_limit can be much larger than any stored table.
double u_row_mass(std::uint32_t r, std::uint32_t s_limit);

/// Exact pmf of the urn process H(n_1,...,n_r): q(s) at index s for
/// s = r..n_1-n_r+1. n_list must be strictly decreasing and positive.
std::vector<double> urn_pmf(std::span<const std::uint64_t> n_list);
double urn_exact(std::uint64_t s, std::span<const std::uint64_t> n_list);

/// u(s; p_1..p_r): law of r + sum of geometric(p_i) variables (the n -> inf
/// limit of the urn process). Each p_i must lie in (0, 1].
std::vector<double> u_geometric_pmf(std::span<const double> p_list, std::uint32_t s_max);
double u_geometric(std::uint32_t s, std::span<const double> p_list);

/// Limiting probability that an agent at relative position theta obtains his
/// s-th preference.
double q_s_nb(std::uint32_t s, double theta);
double q_s_ab(std::uint32_t s, double theta);
double q_s_sd(std::uint32_t s, double theta);
double q_s(Mechanism mechanism, std::uint32_t s, double theta);

/// q_s(theta) for every s = 1..s_max in one pass (index 0 unused).
std::vector<double> q_vector(Mechanism mechanism, std::uint32_t s_max, double theta);

/// Mass missing from sum_{s<=s_max} q_s(theta): the computed truncation tail.
double q_tail(Mechanism mechanism, std::uint32_t s_max, double theta);

/// Adaptive-Simpson integral of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 48);

/// int_0^theta q_s(phi) dphi by adaptive quadrature.
double cumulative_q(Mechanism mechanism, std::uint32_t s, double theta,
                    double quad_tol = 1e-10);

/// Limiting average k-approval welfare over all agents.
double welfare_limit_kapproval(Mechanism mechanism, std::uint32_t k);

/// Limiting k-approval / Borda order bias.
double order_bias_limit_kapproval(Mechanism mechanism, std::uint32_t k);
double order_bias_limit_borda(Mechanism mechanism);

}  // namespace allocsim
