#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace aniso {

// Worker count: ANISO_THREADS env var if set, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("ANISO_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots;
// reductions happen after the join, so output is order-independent.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
  unsigned workers = thread_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (workers > n) workers = static_cast<unsigned>(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace aniso
