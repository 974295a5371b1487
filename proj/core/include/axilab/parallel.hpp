// Deterministic task parallelism: independent tasks write into their own
// slots and reductions run serially afterwards, so results are bit-identical
// for any thread count. AXILAB_THREADS caps the pool (default 1).
#pragma once

#include <cstddef>
#include <functional>

namespace axilab {

// Thread cap from AXILAB_THREADS, clamped to [1, hardware_concurrency].
int thread_cap();

// Runs fn(0..n-1), splitting across at most thread_cap() threads.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace axilab
