#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "allocsim/errors.hpp"
#include "allocsim/limits.hpp"
#include "allocsim/mechanisms.hpp"

namespace allocsim {

/// Positional scoring rule: a nonincreasing rank-utility vector in [0,1].
/// k-approval scores 1 for the top k ranks; Borda scores (n-s)/(n-1).
class ScoringRule {
 public:
  enum class Kind { KApproval, Borda, Custom };

  static ScoringRule k_approval(std::uint32_t k);
  static ScoringRule borda();
  /// sigma is the full utility vector for a fixed n (index 0 = rank 1).
  /// lambda, when given, declares lim_n sigma_n(s) per rank for limit curves.
  static ScoringRule custom(std::vector<double> sigma,
                            std::optional<std::vector<double>> lambda = std::nullopt);

  Kind kind() const { return kind_; }
  std::uint32_t k() const { return k_; }
  const std::string& name() const { return name_; }

  /// sigma_n(1..n); index 0 = rank 1. Throws BadRule when the rule cannot be
  /// materialized at this n or violates the nonincreasing-[0,1] contract.
  std::vector<double> materialize(std::uint32_t n) const;

  bool has_limit() const;
  /// lambda_s = lim_n sigma_n(s); throws NoLimitRule when undeclared.
  double lambda_at(std::uint32_t s) const;

 private:
  ScoringRule() = default;
  Kind kind_ = Kind::Borda;
  std::uint32_t k_ = 0;
  std::vector<double> sigma_;
  std::optional<std::vector<double>> lambda_;
  std::string name_;
};

/// W_n(theta): total imputed utility of the agents with relative position at
/// most theta, i.e. positions 1..floor(n*theta).
double welfare_of(const Assignment& assignment, const ScoringRule& rule, double theta);

struct WelfareCurve {
  Mechanism mechanism{};
  std::string rule_name;
  std::vector<double> theta;
  std::vector<double> value;  // limit of W_n(theta)/n
  std::vector<double> tail;   // truncation mass not included in value
};

/// Limit curve sum_{s<=s_max} lambda_s int_0^theta q_s, with the truncated
/// tail mass reported alongside.
WelfareCurve welfare_limit_curve(Mechanism mechanism, const ScoringRule& rule,
                                 std::span<const double> theta_grid,
                                 std::uint32_t s_max = 200,
                                 double quad_tol = 1e-10);

/// theta* with curve(theta*) = curve(1)/2, by bisection on the limit curve.
double welfare_curve_median(Mechanism mechanism, const ScoringRule& rule,
                            std::uint32_t s_max = 200, double tol = 1e-10);

}  // namespace allocsim
