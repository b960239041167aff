#include "pearl/parallel.hpp"

#include <atomic>

namespace pearl {

namespace {
std::atomic<int> configured_jobs{0};
}

void set_jobs(int jobs) { configured_jobs = jobs < 0 ? 0 : jobs; }

int jobs()
{
    const int j = configured_jobs.load();
    if (j > 0)
        return j;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace pearl
