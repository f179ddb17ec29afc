#pragma once

#include <cstddef>
#include <functional>

namespace mdc {

// Worker count used by data-parallel sweeps. 0 means hardware concurrency.
void set_threads(unsigned n);
unsigned threads();

// Runs body(i) for i in [0, n). Each index is owned by one worker, so writes
// to slot i are race free and results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mdc
