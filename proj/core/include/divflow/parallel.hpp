#pragma once

#include <cstddef>
#include <functional>

namespace divflow {

/// Thread cap from DIVFLOW_THREADS (default: hardware concurrency).
int thread_cap();

/// Splits [0, n) into contiguous chunks and runs body(lo, hi) on up to
/// `threads` threads. Chunk boundaries depend only on n and threads.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace divflow
