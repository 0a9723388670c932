#pragma once

#include <cstddef>
#include <functional>

namespace sbgk {

/// Number of worker threads used by parallel_for (default: hardware
/// concurrency, at least 1).
int worker_count();
void set_worker_count(int workers);

/// Runs body(begin, end) over [0, n) split into fixed chunks of `grain`
/// items. The chunking does not depend on the worker count, so any
/// per-chunk result is identical however the chunks are scheduled.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 256);

/// Sum of chunk(begin, end) over the same fixed chunks, reduced in chunk
/// order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& chunk,
                    std::size_t grain = 256);

}  // namespace sbgk
