#pragma once
#include <cstddef>
#include <functional>

namespace degen {

// Worker count: hardware concurrency, capped by DEGEN_THREADS when set.
int worker_count();

// Runs body(i) for i in [0, n). Results must be written to index-owned slots so
// assembly order is independent of scheduling. The lowest-index exception wins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace degen
