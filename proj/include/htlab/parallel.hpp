#pragma once

#include <cstddef>
#include <functional>

namespace htlab {

// Worker count for path-level fan-out: HTLAB_THREADS when set, otherwise the
// hardware concurrency. Thread count never affects results; work is
// partitioned by path index and every path owns its RNG stream.
unsigned worker_count();

// Runs fn(begin, end) over a partition of [0, n) on worker_count() threads.
void parallel_for_blocks(
    std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace htlab
