#pragma once

#include <cstddef>
#include <functional>

namespace magweyl {

// Worker count used by matrix assembly and sweeps. 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Calls body(i) for i in [0, n). Indices are split into contiguous static
// chunks so every output slot is written by the same code path regardless of
// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace magweyl
