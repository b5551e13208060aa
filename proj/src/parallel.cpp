#include "fdstat/parallel.hpp"

namespace fdstat {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_worker_count(unsigned workers) noexcept { g_workers.store(workers); }

unsigned worker_count() noexcept {
  const unsigned w = g_workers.load();
  if (w != 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace fdstat
