#pragma once

#include <cstddef>
#include <functional>

namespace npd {

// Worker count for data-parallel loops: hardware concurrency, capped by
// the NPD_THREADS environment variable when set. Always >= 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) across workers. The caller must make
// iterations independent (each writing its own slot), which keeps
// results identical to the sequential loop. The first exception (lowest
// starting block) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace npd
