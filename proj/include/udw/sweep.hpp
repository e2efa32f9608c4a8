#pragma once

#include <cstddef>
#include <functional>

namespace udw {

// Row-parallel map: calls fn(i) for i in [0, count). fn must write its
// result into a slot owned by index i; nothing else is shared, so the
// output is identical whatever the thread count or schedule.
// The first exception thrown by any row is rethrown after the loop.
void run_rows(std::size_t count, int jobs,
              const std::function<void(std::size_t)>& fn);

// Reference implementation the parallel path is tested and benchmarked
// against.
void run_rows_serial(std::size_t count,
                     const std::function<void(std::size_t)>& fn);

int max_jobs();

}  // namespace udw
