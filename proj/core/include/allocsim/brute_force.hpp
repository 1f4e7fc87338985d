#pragma once

#include <cstdint>

#include "allocsim/mechanism.hpp"
#include "allocsim/rank_distribution.hpp"

namespace allocsim {

/// Exact rank distribution by exhaustive enumeration of every reveal the
/// mechanism can consume, weighted by its probability. Equivalent to
/// enumerating all n!^n preference profiles, but only the consumed prefixes
/// are branched on. Capped at n <= 6 (OracleTooLarge beyond).
RankDistribution brute_force_distribution(Mechanism mechanism, std::uint32_t n);

}  // namespace allocsim
