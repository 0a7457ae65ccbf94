#pragma once

#include <cstdint>
#include <functional>

namespace compass {

/// Number of workers to use when `requested` is 0 (hardware concurrency,
/// at least 1).
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, count) across `workers` threads. Work is split
/// into contiguous blocks per thread; results must not depend on the split
/// (callers key randomness by i, never by thread). Exceptions from fn are
/// captured and the first one rethrown on the calling thread.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace compass
