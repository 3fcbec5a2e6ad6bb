#include "atr/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace atr {
namespace {
std::atomic<unsigned> g_threads{0};
thread_local bool t_in_region = false;
}  // namespace

void set_thread_count(unsigned threads) { g_threads = threads; }

unsigned thread_count() {
  const unsigned configured = g_threads.load();
  if (configured != 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {
bool in_parallel_region() { return t_in_region; }
void set_in_parallel_region(bool value) { t_in_region = value; }
}  // namespace detail

}  // namespace atr
