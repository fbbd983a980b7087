#pragma once

#include <functional>

namespace hyperct {

// Worker count: HYPERCT_THREADS when set and positive, otherwise the
// hardware concurrency (at least 1).
int worker_threads();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks;
// callers write results into per-index slots so ordering stays fixed. The
// first exception thrown by any block is rethrown on the calling thread.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace hyperct
