// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "pearl/covers.hpp"
#include "pearl/feynman.hpp"
#include "pearl/parallel.hpp"

using namespace pearl;

namespace {

const PearlChain& chain22()
{
    static const PearlChain chain = enumerate_pearl_chains(2, 2).at(0);
    return chain;
}

void order_sum_parallel(benchmark::State& state)
{
    set_jobs(static_cast<int>(state.range(0)));
    const auto leak = LeakingVector::zero(chain22().vertex_count());
    for (auto _ : state)
        benchmark::DoNotOptimize(order_sum(chain22(), leak, 8));
    set_jobs(0);
}

void order_sum_reference(benchmark::State& state)
{
    const auto leak = LeakingVector::zero(chain22().vertex_count());
    for (auto _ : state)
        benchmark::DoNotOptimize(order_sum_serial(chain22(), leak, 8));
}

void chain_series_parallel(benchmark::State& state)
{
    set_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(pearl_chain_series(chain22(), LeakyDegree::parse("-1,1"), 5, true));
    set_jobs(0);
}

void chain_series_reference(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(pearl_chain_series_serial(chain22(), LeakyDegree::parse("-1,1"), 5, true));
}

void covers_parallel(benchmark::State& state)
{
    set_jobs(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(count_covers_by_degree(chain22(), LeakyDegree::zero(2), 3, false, true));
    set_jobs(0);
}

void covers_reference(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(count_covers_by_degree_serial(chain22(), LeakyDegree::zero(2), 3, false, true));
}

} // namespace

BENCHMARK(order_sum_parallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(order_sum_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(chain_series_parallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(chain_series_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(covers_parallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(covers_reference)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
