#pragma once

#include <cstddef>
#include <functional>

namespace metriclab {

/// Worker count: METRIC_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations are handed out in contiguous
/// blocks; body must only write to storage owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace metriclab
