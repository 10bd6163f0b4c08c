#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mcurv {

/// Worker count: explicit request > MCURV_THREADS env > hardware concurrency.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MCURV_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(block) for block in [0, nblocks). Blocks are independent work
/// items; each writes only to its own slot of caller-owned storage, so the
/// result is identical for any worker count.
template <class Fn>
void parallel_blocks(size_t nblocks, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || nblocks <= 1) {
    for (size_t b = 0; b < nblocks; ++b) fn(b);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  size_t nt = std::min<size_t>(threads, nblocks);
  pool.reserve(nt);
  for (size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace mcurv
