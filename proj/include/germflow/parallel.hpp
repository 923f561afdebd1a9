#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace germflow {

// Worker count: GERMFLOW_THREADS when set and positive, else the hardware count.
std::size_t thread_count();

// Runs fn(i) for i in [0, n) on contiguous index blocks. Results must be
// written to index-addressed storage so output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace germflow
