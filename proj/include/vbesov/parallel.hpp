#pragma once

#include <cstddef>
#include <functional>

namespace vbesov {

// Worker count for data-parallel loops (default: hardware concurrency).
void set_worker_count(unsigned n);
[[nodiscard]] unsigned worker_count() noexcept;

// Runs body(i) for i in [0, n); each index is handled exactly once and the
// results are expected to go to per-index slots, so output never depends on
// scheduling.  The first exception thrown by any body is rethrown.  Calls made
// from inside a body run serially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vbesov
