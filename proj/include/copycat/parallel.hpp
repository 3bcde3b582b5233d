#pragma once

#include <cstddef>
#include <functional>

namespace copycat {

// Worker count from COPYCAT_THREADS, falling back to hardware concurrency.
std::size_t default_thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; the first exception thrown is rethrown after all
// workers finish.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace copycat
