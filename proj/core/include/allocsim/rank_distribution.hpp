#pragma once

#include <cstdint>
#include <vector>

#include "allocsim/errors.hpp"

namespace allocsim {

/// Expected rank distribution: D(p, s) = P(position p obtains rank s),
/// tracked for a subset of positions and a rank band s = 1..s_max. Mass at
/// ranks beyond s_max is kept per row in an overflow bucket.
struct RankDistribution {
  enum class Provenance { Exact, Estimated };

  std::uint32_t n = 0;
  std::vector<std::uint32_t> positions;  // ascending, 1-based
  std::uint32_t s_max = 0;
  std::vector<double> cells;     // positions.size() x s_max, row-major
  std::vector<double> overflow;  // per tracked position
  Provenance provenance = Provenance::Exact;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  std::size_t row_of(std::uint32_t position) const {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (positions[i] == position) return i;
    }
    throw BadIndex("position not tracked in rank distribution");
  }

  double at(std::uint32_t position, std::uint32_t s) const {
    if (s == 0 || s > s_max) throw BadIndex("rank outside stored band");
    return cells[row_of(position) * s_max + (s - 1)];
  }

  double overflow_at(std::uint32_t position) const { return overflow[row_of(position)]; }

  double row_sum(std::uint32_t position) const {
    std::size_t row = row_of(position);
    double sum = overflow[row];
    for (std::uint32_t s = 1; s <= s_max; ++s) sum += cells[row * s_max + (s - 1)];
    return sum;
  }
};

}  // namespace allocsim
