#pragma once

#include <cstddef>
#include <functional>

namespace sewprop {

// Worker count used by parallel_for; 1 runs everything inline.
void set_thread_count(int n);
int thread_count();

// Calls fn(i) for i in [0, n). Each index is handled by exactly one worker,
// so callers that write only to slot i get results independent of the
// thread count. The first exception thrown is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sewprop
