#pragma once

#include <cstddef>
#include <functional>

namespace sll {

/// Parallelism degree: explicit argument if nonzero, else the SLL_PARALLELISM
/// environment variable, else hardware concurrency.
unsigned parallelism_degree(unsigned requested = 0);

/// Runs fn(0..n-1) across a worker pool. Callers must make each task
/// independent (own RNG substream, own output slot); results are then
/// identical to a sequential run regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace sll
