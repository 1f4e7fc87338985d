#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "allocsim/mechanisms.hpp"

namespace allocsim {

/// Thread count resolution: explicit request wins, then the ALLOCSIM_THREADS
/// environment variable, then 1.
unsigned resolve_threads(unsigned requested);

/// Runs `trials` independent simulations and collects fn(assignment) per
/// trial. Trial t always uses the substream derived from (rng, t), and
/// results are returned indexed by trial, so aggregates computed from the
/// returned vector are identical for every thread count.
template <typename T, typename MapFn>
std::vector<T> map_trials(Mechanism mechanism, std::uint32_t n, std::uint64_t trials,
                          const RngSpec& rng, unsigned threads, MapFn fn);

/// Accumulates integer counts across trials: fn(assignment, counts) adds the
/// trial's counts into a slot array. Thread-local accumulators are merged by
/// addition, which is order-independent for integers, so the totals are
/// identical for every thread count.
template <typename CountFn>
std::vector<std::uint64_t> count_trials(Mechanism mechanism, std::uint32_t n,
                                        std::uint64_t trials, const RngSpec& rng,
                                        unsigned threads, std::size_t slots,
                                        CountFn fn);

template <typename T, typename MapFn>
std::vector<T> map_trials(Mechanism mechanism, std::uint32_t n, std::uint64_t trials,
                          const RngSpec& rng, unsigned threads, MapFn fn) {
  std::vector<T> results(trials);
  threads = resolve_threads(threads);
  if (threads <= 1 || trials <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      results[t] = fn(run(mechanism, n, rng, t));
    }
    return results;
  }

  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (;;) {
        std::uint64_t t = next.fetch_add(1);
        if (t >= trials) return;
        results[t] = fn(run(mechanism, n, rng, t));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

template <typename CountFn>
std::vector<std::uint64_t> count_trials(Mechanism mechanism, std::uint32_t n,
                                        std::uint64_t trials, const RngSpec& rng,
                                        unsigned threads, std::size_t slots,
                                        CountFn fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || trials <= 1) {
    std::vector<std::uint64_t> counts(slots, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
      fn(run(mechanism, n, rng, t), counts);
    }
    return counts;
  }

  std::atomic<std::uint64_t> next{0};
  std::mutex merge_mutex;
  std::vector<std::uint64_t> totals(slots, 0);
  std::exception_ptr error;
  auto worker = [&] {
    std::vector<std::uint64_t> local(slots, 0);
    try {
      for (;;) {
        std::uint64_t t = next.fetch_add(1);
        if (t >= trials) break;
        fn(run(mechanism, n, rng, t), local);
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      for (std::size_t i = 0; i < slots; ++i) totals[i] += local[i];
    } catch (...) {
      std::lock_guard<std::mutex> lock(merge_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return totals;
}

}  // namespace allocsim
