#include <benchmark/benchmark.h>

#include "allocsim/brute_force.hpp"
#include "allocsim/mechanisms.hpp"

using namespace allocsim;

namespace {

void BM_RunNaiveBoston(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    auto a = run_nb(n, {42}, trial++);
    benchmark::DoNotOptimize(a.records.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunNaiveBoston)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_RunAdaptiveBoston(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    auto a = run_ab(n, {42}, trial++);
    benchmark::DoNotOptimize(a.records.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunAdaptiveBoston)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_RunSerialDictatorship(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    auto a = run_sd(n, {42}, trial++);
    benchmark::DoNotOptimize(a.records.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunSerialDictatorship)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BruteForce(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto d = brute_force_distribution(Mechanism::NaiveBoston, n);
    benchmark::DoNotOptimize(d.cells.data());
  }
}
BENCHMARK(BM_BruteForce)->Arg(3)->Arg(4)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
