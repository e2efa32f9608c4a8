#include <udw/sweep.hpp>

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace udw {

void run_rows_serial(std::size_t count,
                     const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

int max_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void run_rows(std::size_t count, int jobs,
              const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count < 2) {
    run_rows_serial(count, fn);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr first;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(udw_run_rows_first_error)
      {
        if (!first) first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
#else
  run_rows_serial(count, fn);
#endif
}

}  // namespace udw
