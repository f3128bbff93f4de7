#pragma once

#include <cstddef>
#include <functional>

namespace sgrf {

/// Worker cap: SPHERE_GRF_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n), statically partitioned into contiguous
/// chunks. Each index is visited exactly once; results must be written to
/// disjoint locations. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sgrf
