#pragma once

#include <cstddef>
#include <functional>

namespace focalkit {

// Worker count from FOCALKIT_THREADS (0 or unset = hardware concurrency).
int thread_count();

// Runs body(i) for i in [0, n). Each index is processed exactly once;
// callers write into preallocated slots so the result does not depend on
// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace focalkit
