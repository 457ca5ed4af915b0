#pragma once

// Static-partition parallel loop over independent work items.  Thread count
// comes from the WEDGE_THREADS environment variable (default 1).  Results
// must be written by index so output does not depend on scheduling.

#include <cstddef>
#include <functional>

namespace wedge {

int thread_count();

/// Runs body(i) for i in [0, count); rethrows the first exception.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace wedge
