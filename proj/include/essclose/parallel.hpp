#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace essclose {

/// Thread budget: ESSCLOSE_THREADS if set, else hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("ESSCLOSE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs f(i) for i in [0, n). Each index is independent; callers must write
/// results into per-index slots so the outcome does not depend on scheduling.
template <class F>
void parallel_for(size_t n, F&& f) {
  unsigned threads = thread_budget();
  if (threads <= 1 || n < 256) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (static_cast<size_t>(threads) > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    size_t lo = static_cast<size_t>(t) * chunk;
    size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace essclose
