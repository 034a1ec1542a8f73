#pragma once

// Static-partition parallel loop. FHJ_THREADS caps the worker count; every
// index is processed exactly once, so results do not depend on the count.

#include <cstddef>
#include <functional>

namespace fhj {

/// Worker count: FHJ_THREADS if set to a positive integer, else the hardware concurrency.
unsigned thread_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Exceptions from
/// workers are rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 1);

}  // namespace fhj
