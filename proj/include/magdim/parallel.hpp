#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace magdim {

/// Process-wide worker count used by the parallel loops below. 1 means run
/// inline on the calling thread.
inline std::atomic<unsigned>& thread_count_slot() {
  static std::atomic<unsigned> slot{1};
  return slot;
}

inline void set_num_threads(unsigned n) { thread_count_slot() = std::max(1u, n); }
inline unsigned num_threads() { return thread_count_slot(); }

/// Runs body(i) for every i in [0, count). Work items must be independent:
/// each one writes only to its own output slot, so the result never depends
/// on how items are spread across threads. The first exception thrown by any
/// item is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(num_threads(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace magdim
