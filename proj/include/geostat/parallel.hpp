#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

// Process-wide worker count and a chunked parallel loop. Work is split into
// contiguous ranges that write disjoint outputs, so results never depend on
// the number of threads.

namespace geostat {

namespace detail {
inline std::atomic<int>& thread_override() {
  static std::atomic<int> n{0};
  return n;
}
}  // namespace detail

// 0 restores automatic selection (GEOSTAT_THREADS env var, then hardware).
inline void set_threads(int n) { detail::thread_override().store(n < 0 ? 0 : n); }

inline int max_threads() {
  const int forced = detail::thread_override().load();
  if (forced > 0) return forced;
  if (const char* env = std::getenv("GEOSTAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::size_t(max_threads()), count == 0 ? 1 : count);
  if (workers <= 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= count) break;
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace geostat
