#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "allocsim/limits.hpp"
#include "allocsim/preferences.hpp"
#include "support/stats.hpp"

using namespace allocsim;

namespace {

PreferenceSource fresh(std::uint32_t n, std::uint64_t seed, std::uint64_t idx = 0) {
  return PreferenceSource(n, SplitMix64(derive_stream(seed, idx)));
}

}  // namespace

TEST_SUITE_BEGIN("preferences");

TEST_CASE("single item source is forced") {
  auto src = fresh(1, 42);
  CHECK(src.reveal_next() == 0);
  CHECK(src.exhausted());
  CHECK_THROWS_AS(src.reveal_next(), ExhaustedPreferences);
}

TEST_CASE("reveals form a permutation and the last reveal is forced") {
  for (std::uint32_t n : {2u, 5u, 17u, 100u}) {
    auto src = fresh(n, 7, n);
    std::vector<bool> seen(n, false);
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
      std::uint32_t item = src.reveal_next();
      CHECK_FALSE(seen[item]);
      seen[item] = true;
    }
    std::uint32_t last = src.reveal_next();
    CHECK_FALSE(seen[last]);
    CHECK(src.exhausted());
  }
}

TEST_CASE("first reveal is uniform") {
  const std::uint64_t samples = 100000;
  std::vector<std::uint64_t> counts(3, 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto src = fresh(3, 11, i);
    counts[src.reveal_next()] += 1;
  }
  for (int item = 0; item < 3; ++item) {
    double freq = static_cast<double>(counts[item]) / samples;
    CHECK(std::abs(freq - 1.0 / 3.0) < 0.01);
  }
}

TEST_CASE("prefixes are exchangeable across the sparse/dense boundary") {
  // n = 4 with prefix length 3 crosses the Fisher-Yates switchover.
  const std::uint32_t n = 4;
  const std::uint64_t samples = 200000;
  std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto src = fresh(n, 13, i);
    std::vector<std::uint32_t> prefix(3);
    for (auto& x : prefix) x = src.reveal_next();
    counts[prefix] += 1;
  }
  const double cells = 4.0 * 3.0 * 2.0;
  CHECK(counts.size() == static_cast<std::size_t>(cells));
  for (const auto& [prefix, c] : counts) {
    double freq = static_cast<double>(c) / samples;
    CHECK(stats::cell_within_3sigma(freq, 1.0 / cells, samples));
  }
}

TEST_CASE("identical streams reproduce identical reveal sequences") {
  auto a = fresh(50, 99, 3);
  auto b = fresh(50, 99, 3);
  for (int i = 0; i < 50; ++i) CHECK(a.reveal_next() == b.reveal_next());
  auto c = fresh(50, 99, 4);
  auto d = fresh(50, 99, 3);
  bool all_equal = true;
  for (int i = 0; i < 50; ++i) all_equal &= (c.reveal_next() == d.reveal_next());
  CHECK_FALSE(all_equal);
}

TEST_CASE("reveal_next_in with everything available takes one draw") {
  std::vector<std::uint8_t> avail(10, 1);
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto src = fresh(10, 5, i);
    auto draw = src.reveal_next_in(avail);
    CHECK(draw.draws == 1);
  }
}

TEST_CASE("two items, one available: draws split 1/2 - 1/2") {
  std::vector<std::uint8_t> avail = {0, 1};
  std::uint64_t one = 0, two = 0;
  const std::uint64_t samples = 100000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto src = fresh(2, 17, i);
    auto draw = src.reveal_next_in(avail);
    CHECK(draw.item == 1);
    if (draw.draws == 1) {
      ++one;
    } else {
      CHECK(draw.draws == 2);
      ++two;
    }
  }
  CHECK(std::abs(static_cast<double>(one) / samples - 0.5) < 0.01);
  CHECK(std::abs(static_cast<double>(two) / samples - 0.5) < 0.01);
}

TEST_CASE("draw count distribution matches one urn step") {
  // A fresh source with pool 6 and 3 available items behaves like the last
  // iteration of the urn process H(7, 3): P(draws = g) = q(1 + g; 7, 3).
  const std::uint32_t n = 6;
  std::vector<std::uint8_t> avail = {1, 0, 1, 0, 0, 1};
  const std::uint64_t samples = 200000;
  std::vector<std::uint64_t> counts(6, 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto src = fresh(n, 23, i);
    auto draw = src.reveal_next_in(avail);
    CHECK(avail[draw.item] == 1);
    counts[draw.draws] += 1;
  }
  std::vector<std::uint64_t> urn = {7, 3};
  auto pmf = urn_pmf(urn);
  for (std::uint32_t g = 1; g <= 4; ++g) {
    double freq = static_cast<double>(counts[g]) / samples;
    CHECK(stats::cell_within_3sigma(freq, pmf[1 + g], samples));
  }
}

TEST_CASE("reveal_next_in never returns consumed or unavailable items") {
  std::vector<std::uint8_t> avail(12, 0);
  for (std::uint32_t i : {1u, 4u, 9u}) avail[i] = 1;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    auto src = fresh(12, 31, rep);
    std::vector<bool> seen(12, false);
    for (int k = 0; k < 3; ++k) {
      auto draw = src.reveal_next_in(avail);
      CHECK(avail[draw.item] == 1);
      CHECK_FALSE(seen[draw.item]);
      seen[draw.item] = true;
      avail[draw.item] = 0;
    }
    CHECK_THROWS_AS(src.reveal_next_in(avail), NoAvailableItem);
    for (std::uint32_t i : {1u, 4u, 9u}) avail[i] = 1;
  }
}

TEST_CASE("full_profile is a deterministic permutation") {
  auto p1 = full_profile(8, SplitMix64(derive_stream(77, 0)));
  auto p2 = full_profile(8, SplitMix64(derive_stream(77, 0)));
  CHECK(p1 == p2);
  std::vector<std::uint32_t> sorted = p1;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint32_t> expect(8);
  std::iota(expect.begin(), expect.end(), 0u);
  CHECK(sorted == expect);
}

TEST_SUITE_END();
