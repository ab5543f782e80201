#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace nilheat {

/// Worker count resolution: explicit value, else NILHEAT_WORKERS, else
/// hardware concurrency.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NILHEAT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Static partition of [0, total) across workers.  Callers write results into
/// disjoint per-index slots, so output is independent of scheduling.
inline void parallel_for_range(long total, int workers,
                               const std::function<void(long, long)>& chunk) {
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, total > 0 ? total : 1)));
  if (workers == 1) {
    chunk(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long begin = total * w / workers;
    const long end = total * (w + 1) / workers;
    pool.emplace_back([&chunk, begin, end] { chunk(begin, end); });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace nilheat
