#pragma once

#include <cstddef>
#include <functional>

namespace gskor {

/// Number of worker threads: hardware concurrency capped by the
/// GSKOR_THREADS environment variable (minimum 1).
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on contiguous index blocks, one thread per
/// block. Callers must write results into disjoint, index-addressed slots
/// and reduce sequentially afterwards, so any thread count produces
/// identical output. If workers throw, the exception with the smallest
/// index is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gskor
