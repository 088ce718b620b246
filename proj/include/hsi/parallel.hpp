#pragma once

#include <cstddef>
#include <functional>

namespace hsi {

// Process-wide worker cap for the embarrassingly parallel loops (per-pixel
// classification and abundance solves). Default 1; results are identical for
// any setting because workers write disjoint slots and never reduce.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(i) for i in [0, count), chunked across up to max_threads() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace hsi
