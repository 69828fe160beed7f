#pragma once

#include <cstddef>
#include <functional>

namespace sdfshadow {

/// Worker count used by every parallel loop in the library. Defaults to the
/// SDFSHADOW_THREADS environment variable, else the hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);  // 0 restores the default

/// Splits [begin, end) into contiguous chunks and runs `body(chunk_begin, chunk_end)`
/// on up to thread_count() threads. Chunk boundaries depend only on the range
/// and `grain`, never on the worker count, so per-chunk reductions are
/// reproducible. Exceptions thrown by a chunk are rethrown on the caller.
void parallel_for(std::size_t begin, std::size_t end, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sdfshadow
