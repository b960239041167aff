#pragma once

// OpenMP task fan-out with a deterministic, index-ordered result vector.

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pearl {

/// Number of worker threads used by the parallel kernels; 0 restores the
/// OpenMP default.
void set_jobs(int jobs);
int jobs();

/// results[i] = fn(i) for i in [0, count). Work is distributed dynamically;
/// the result order never depends on scheduling. The first exception thrown
/// by any task is rethrown after the loop.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn)
{
    std::vector<T> results(count);
    std::exception_ptr failure;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs())
    for (long long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(pearl_parallel_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

} // namespace pearl
