#pragma once

#include <cstddef>
#include <functional>

namespace tokencore {

/// Worker count from TOKENCORE_THREADS, falling back to hardware concurrency.
/// Always >= 1.
std::size_t default_thread_count();

/// Calls fn(i) for every i in [0, n) on up to `threads` workers. Indices are
/// split into contiguous chunks; fn must only write to slot i of its output.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace tokencore
