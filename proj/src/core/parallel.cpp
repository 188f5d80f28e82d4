#include "gwborder/parallel.hpp"

#include <atomic>

namespace gwb {

namespace {

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned> g_limit{default_workers()};

}  // namespace

void set_worker_limit(unsigned n) { g_limit.store(n == 0 ? default_workers() : n); }

unsigned worker_limit() { return g_limit.load(); }

}  // namespace gwb
