#pragma once

// Ordered parallel map. The worker count comes from ISOWILL_THREADS only;
// results are stored by index, so output never depends on it.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace isowill {

inline int thread_count() {
  if (const char* s = std::getenv("ISOWILL_THREADS")) {
    try {
      const int n = std::stoi(s);
      if (n >= 1) return std::min(n, 256);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

template <class T, class Fn>
std::vector<T> parallel_map(size_t n, const Fn& fn, int threads = thread_count()) {
  std::vector<T> out(n);
  if (n == 0) return out;
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, threads)));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (size_t i = next++; i < n; i = next++) out[i] = fn(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace isowill
