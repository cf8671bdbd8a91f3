#pragma once

#include <cstddef>
#include <functional>

namespace dynlab {

/// Worker cap: the value set by set_max_threads if positive, else the
/// DYNLAB_THREADS environment variable, else hardware concurrency.
unsigned max_threads();
void set_max_threads(unsigned n);  // 0 restores the default

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks; callers
/// write results into preallocated slots so reduction order is fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dynlab
