#pragma once

#include <cstddef>
#include <functional>

namespace fdss {

/// Thread count used when a caller passes 0.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is handed
/// out in contiguous chunks; body must only write to per-index state. The first
/// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace fdss
