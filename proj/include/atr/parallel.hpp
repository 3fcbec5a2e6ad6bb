#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace atr {

/// Worker count used by every parallel section; 0 means hardware concurrency.
void set_thread_count(unsigned threads);
unsigned thread_count();

namespace detail {
bool in_parallel_region();
void set_in_parallel_region(bool value);
}  // namespace detail

/// Calls `body(i)` for every i in [0, n). Work is split into contiguous static
/// chunks; callers write into pre-sized, index-addressed outputs so results do
/// not depend on the thread count. Nested calls run serially on the caller.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = thread_count();
  if (n == 0) return;
  if (workers <= 1 || n == 1 || detail::in_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    pool.emplace_back([&, begin, end] {
      detail::set_in_parallel_region(true);
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
      detail::set_in_parallel_region(false);
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace atr
