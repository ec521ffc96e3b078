#pragma once

#include <cstddef>
#include <functional>

namespace seu::io {

// Worker count from SEU_FORGE_THREADS: unset or 0 means hardware concurrency.
// Throws std::invalid_argument for a value that is not a non-negative integer.
unsigned thread_count();

// Runs task(i) for i in [0, count) on up to `threads` workers. Each index is
// run exactly once; the first exception thrown (lowest index) is rethrown
// after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task,
                  unsigned threads = thread_count());

}  // namespace seu::io
