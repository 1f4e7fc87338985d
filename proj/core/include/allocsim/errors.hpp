#pragma once

#include <stdexcept>
#include <string>

namespace allocsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// reveal_next() called on a source with every item already consumed.
class ExhaustedPreferences : public Error {
 public:
  using Error::Error;
};

/// reveal_next_in() called when no available item remains unconsumed.
class NoAvailableItem : public Error {
 public:
  using Error::Error;
};

/// Mechanism invoked with n = 0.
class EmptyInstance : public Error {
 public:
  using Error::Error;
};

/// theta outside [0, 1].
class BadTheta : public Error {
 public:
  using Error::Error;
};

/// theta grid not sorted or with values outside [0, 1].
class BadThetaGrid : public Error {
 public:
  using Error::Error;
};

/// Sequence index out of range (e.g. omega(0)).
class BadIndex : public Error {
 public:
  using Error::Error;
};

/// Urn sizes not strictly decreasing positive integers.
class BadUrnSpec : public Error {
 public:
  using Error::Error;
};

/// Geometric parameter outside (0, 1].
class BadProb : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration requested beyond its size cap.
class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Scoring rule violates the nonincreasing-[0,1] contract.
class BadRule : public Error {
 public:
  using Error::Error;
};

/// Limit computation requested for a rule with no declared rank-utility limit.
class NoLimitRule : public Error {
 public:
  using Error::Error;
};

/// Order bias requested for a rule with u(1) == u(n).
class DegenerateRule : public Error {
 public:
  using Error::Error;
};

}  // namespace allocsim
