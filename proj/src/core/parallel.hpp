#pragma once

#include <cstddef>
#include <functional>

namespace rotogp {

// Worker count: hardware concurrency capped by ROTOGP_THREADS (>= 1).
int worker_count();

// Runs body(i) for i in [0, count). Each index is handled by exactly one
// worker; results must be written to per-index slots so output does not
// depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rotogp
