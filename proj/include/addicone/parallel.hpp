#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace addicone {

/// Worker cap: ADDICONE_THREADS if set (min 1), else hardware concurrency.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("ADDICONE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs f(i) for i in [0, n); results must be written to per-index slots so
/// the merge stays deterministic regardless of scheduling.
template <class F>
inline void parallel_for(std::size_t n, F&& f) {
  const unsigned workers = std::min<std::size_t>(thread_cap(), n ? n : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace addicone
