#pragma once

#include <cstddef>
#include <functional>

namespace dimcut {

/// Worker count: DIMCUT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs task(i) for i in [0, n) on up to worker_count() threads. Tasks must
/// write only to their own output slot. The first exception thrown by any
/// task is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace dimcut
