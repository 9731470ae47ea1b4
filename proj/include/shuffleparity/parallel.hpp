#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "shuffleparity/rng.hpp"

namespace shuffleparity {

// Worker count: explicit request, else SHUFFLEPARITY_THREADS, else the
// hardware concurrency.
int default_thread_count();

// Runs fn(trial_index, stream) for every trial and returns the results in
// trial order. Each trial draws from its own stream derived from (base,
// trial_index), so the outcome is identical for any worker count.
template <class R, class Fn>
std::vector<R> run_trials(int64_t trials, const RngStream& base, Fn fn,
                          int threads = 0) {
  std::vector<R> results(static_cast<size_t>(trials));
  if (trials == 0) return results;
  int workers = threads > 0 ? threads : default_thread_count();
  if (workers > trials) workers = static_cast<int>(trials);
  if (workers <= 1) {
    for (int64_t t = 0; t < trials; ++t) {
      RngStream stream = base.derive(static_cast<uint64_t>(t));
      results[static_cast<size_t>(t)] = fn(t, stream);
    }
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int64_t t = w; t < trials; t += workers) {
        RngStream stream = base.derive(static_cast<uint64_t>(t));
        results[static_cast<size_t>(t)] = fn(t, stream);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace shuffleparity
