#include "allocsim/welfare.hpp"

#include <cmath>

namespace allocsim {

ScoringRule ScoringRule::k_approval(std::uint32_t k) {
  if (k == 0) throw BadRule("k-approval requires k >= 1");
  ScoringRule r;
  r.kind_ = Kind::KApproval;
  r.k_ = k;
  r.name_ = "approval" + std::to_string(k);
  return r;
}

ScoringRule ScoringRule::borda() {
  ScoringRule r;
  r.kind_ = Kind::Borda;
  r.name_ = "borda";
  return r;
}

ScoringRule ScoringRule::custom(std::vector<double> sigma,
                                std::optional<std::vector<double>> lambda) {
  if (sigma.empty()) throw BadRule("custom rule needs a nonempty utility vector");
  double prev = 1.0;
  for (double v : sigma) {
    if (!(v >= 0.0 && v <= prev)) {
      throw BadRule("custom rule must be nonincreasing within [0,1]");
    }
    prev = v;
  }
  ScoringRule r;
  r.kind_ = Kind::Custom;
  r.sigma_ = std::move(sigma);
  r.lambda_ = std::move(lambda);
  r.name_ = "custom";
  return r;
}

std::vector<double> ScoringRule::materialize(std::uint32_t n) const {
  if (n == 0) throw BadRule("cannot materialize a rule at n = 0");
  std::vector<double> sigma(n, 0.0);
  switch (kind_) {
    case Kind::KApproval:
      for (std::uint32_t s = 1; s <= n && s <= k_; ++s) sigma[s - 1] = 1.0;
      break;
    case Kind::Borda:
      if (n == 1) {
        sigma[0] = 1.0;
      } else {
        for (std::uint32_t s = 1; s <= n; ++s) {
          sigma[s - 1] = static_cast<double>(n - s) / (n - 1.0);
        }
      }
      break;
    case Kind::Custom:
      if (sigma_.size() != n) {
        throw BadRule("custom rule defined for n = " + std::to_string(sigma_.size()));
      }
      sigma = sigma_;
      break;
  }
  return sigma;
}

bool ScoringRule::has_limit() const {
  return kind_ != Kind::Custom || lambda_.has_value();
}

double ScoringRule::lambda_at(std::uint32_t s) const {
  if (s == 0) throw BadIndex("rank index must be >= 1");
  switch (kind_) {
    case Kind::KApproval:
      return s <= k_ ? 1.0 : 0.0;
    case Kind::Borda:
      return 1.0;
    case Kind::Custom:
      if (!lambda_) throw NoLimitRule("custom rule has no declared rank-utility limit");
      if (s > lambda_->size()) {
        throw NoLimitRule("custom rule limit declared only up to s = " +
                          std::to_string(lambda_->size()));
      }
      return (*lambda_)[s - 1];
  }
  throw BadRule("unknown rule kind");
}

double welfare_of(const Assignment& assignment, const ScoringRule& rule, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw BadTheta("theta must lie in [0,1]");
  const auto sigma = rule.materialize(assignment.n);
  const auto cutoff = static_cast<std::uint32_t>(std::floor(assignment.n * theta));
  double total = 0.0;
  for (const auto& rec : assignment.records) {
    if (rec.position > cutoff) continue;
    if (rec.rank_obtained <= assignment.n) total += sigma[rec.rank_obtained - 1];
  }
  return total;
}

WelfareCurve welfare_limit_curve(Mechanism mechanism, const ScoringRule& rule,
                                 std::span<const double> theta_grid,
                                 std::uint32_t s_max, double quad_tol) {
  validate_theta_grid(theta_grid);
  if (!rule.has_limit()) {
    throw NoLimitRule("rule has no declared rank-utility limit");
  }
  WelfareCurve curve;
  curve.mechanism = mechanism;
  curve.rule_name = rule.name();
  curve.theta.assign(theta_grid.begin(), theta_grid.end());
  curve.value.reserve(theta_grid.size());
  curve.tail.reserve(theta_grid.size());
  // ranks with lambda == 0 contribute nothing; k-approval needs only s <= k
  std::uint32_t s_hi = s_max;
  if (rule.kind() == ScoringRule::Kind::KApproval) s_hi = std::min(s_max, rule.k());
  // untracked mass beyond s_max, weighted by lambda <= 1; exactly zero for
  // k-approval with k <= s_max
  const bool no_tail = rule.kind() == ScoringRule::Kind::KApproval && rule.k() <= s_max;
  for (double theta : theta_grid) {
    double v = 0.0;
    for (std::uint32_t s = 1; s <= s_hi; ++s) {
      double lam = rule.lambda_at(s);
      if (lam != 0.0) v += lam * cumulative_q(mechanism, s, theta, quad_tol);
    }
    curve.value.push_back(v);
    if (no_tail || theta == 0.0) {
      curve.tail.push_back(0.0);
    } else {
      curve.tail.push_back(integrate(
          [mechanism, s_max](double phi) { return q_tail(mechanism, s_max, phi); },
          0.0, theta, 1e-8));
    }
  }
  return curve;
}

double welfare_curve_median(Mechanism mechanism, const ScoringRule& rule,
                            std::uint32_t s_max, double tol) {
  if (!rule.has_limit()) throw NoLimitRule("rule has no declared rank-utility limit");
  std::uint32_t s_hi = s_max;
  if (rule.kind() == ScoringRule::Kind::KApproval) s_hi = std::min(s_max, rule.k());
  auto eval = [&](double theta) {
    double v = 0.0;
    for (std::uint32_t s = 1; s <= s_hi; ++s) {
      double lam = rule.lambda_at(s);
      if (lam != 0.0) v += lam * cumulative_q(mechanism, s, theta, tol);
    }
    return v;
  };
  const double target = 0.5 * eval(1.0);
  double lo = 0.0, hi = 1.0;
  // the curve is continuous and nondecreasing, so plain bisection suffices
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    double mid = 0.5 * (lo + hi);
    (eval(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace allocsim
