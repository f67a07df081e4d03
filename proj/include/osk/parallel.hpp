/** @file parallel.hpp
 *  Index-parallel loops capped by OSK_THREADS.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace osk {

/// OSK_THREADS when set to a positive integer, else the hardware concurrency.
inline int thread_count() {
  if (const char *env = std::getenv("OSK_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception &) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n). Results must be written by index; the first
/// exception by index is rethrown after all workers finish.
inline void parallel_for(int n, const std::function<void(int)> &fn) {
  if (n <= 0) return;
  const int workers = std::min(thread_count(), n);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto run = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (workers == 1) {
    for (int i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) run(i);
      });
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace osk
