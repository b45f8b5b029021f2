#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace dampo {

// Worker cap: DAMPO_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous blocks, so each
// index is written by exactly one thread and results do not depend on the
// thread count. The first exception (lowest block) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dampo
