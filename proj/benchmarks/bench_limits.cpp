#include <benchmark/benchmark.h>

#include "allocsim/limits.hpp"

using namespace allocsim;

namespace {

void BM_OmegaSequence(benchmark::State& state) {
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    OmegaSequence w(r);
    benchmark::DoNotOptimize(w.at(r));
  }
}
BENCHMARK(BM_OmegaSequence)->Arg(1000)->Arg(1000000);

void BM_NaiveLimits(benchmark::State& state) {
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto st = naive_limits(0.5, r);
    benchmark::DoNotOptimize(st.z(r));
  }
}
BENCHMARK(BM_NaiveLimits)->Arg(50)->Arg(500);

void BM_UTable(benchmark::State& state) {
  const auto s = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto u = u_table(s);
    benchmark::DoNotOptimize(u.at(2, s));
  }
}
BENCHMARK(BM_UTable)->Arg(50)->Arg(200);

void BM_UrnPmf(benchmark::State& state) {
  const auto n1 = static_cast<std::uint64_t>(state.range(0));
  std::vector<std::uint64_t> spec = {n1, static_cast<std::uint64_t>(n1 * 0.3679)};
  for (auto _ : state) {
    auto pmf = urn_pmf(spec);
    benchmark::DoNotOptimize(pmf.data());
  }
}
BENCHMARK(BM_UrnPmf)->Arg(100)->Arg(1000);

void BM_CumulativeQ(benchmark::State& state) {
  const auto s = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    double v = cumulative_q(Mechanism::AdaptiveBoston, s, 1.0, 1e-9);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_CumulativeQ)->Arg(1)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
