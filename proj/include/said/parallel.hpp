#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace said {

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

/// Worker count used by row-parallel loops inside the library (default 1).
inline int num_threads() { return detail::thread_setting().load(std::memory_order_relaxed); }

inline void set_num_threads(int n) {
  detail::thread_setting().store(std::max(1, n), std::memory_order_relaxed);
}

/**
 * @brief Runs fn(begin, end) over contiguous slices of [0, n).
 *
 * Every index is handled by exactly one call and no call shares output with
 * another, so results do not depend on the number of workers.
 */
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), n);
  if (workers <= 1) {
    if (n > 0) fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace said
