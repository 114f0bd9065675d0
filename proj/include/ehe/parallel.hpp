#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ehe {

inline unsigned effective_jobs(unsigned jobs) {
  if (jobs == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
  }
  return jobs;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads (0 = hardware
// concurrency). Indices are strided over workers; callers write results by
// index so the output never depends on the worker count. If several indices
// throw, the exception from the smallest index is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(effective_jobs(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, count);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          error_index[t] = i;
          return;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  std::size_t best = workers;
  for (std::size_t t = 0; t < workers; ++t) {
    if (errors[t] && (best == workers || error_index[t] < error_index[best])) best = t;
  }
  if (best != workers) std::rethrow_exception(errors[best]);
}

}  // namespace ehe
