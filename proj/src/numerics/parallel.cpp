#include "htlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace htlab {

unsigned worker_count() {
  if (const char* env = std::getenv("HTLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_for_blocks(
    std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n ? n : 1);
  if (workers <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace htlab
