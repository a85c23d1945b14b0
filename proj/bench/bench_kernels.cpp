// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to
// compare scaling, e.g. OMP_NUM_THREADS=8 ./bench_kernels

#include "fairvote/kernels.h"
#include "fairvote/recommender.h"

#include <benchmark/benchmark.h>

#include <random>

using namespace fairvote;

namespace
{

kernels::VoteMatrix
randomMatrix(size_t users, size_t entities)
{
    std::mt19937_64 rng(7);
    kernels::VoteMatrix m;
    m.users = users;
    m.entities = entities;
    m.counts.resize(users * entities);
    for (auto& c : m.counts)
    {
        c = static_cast<double>(rng() % 4);
    }
    return m;
}

Registry
randomRegistry(size_t users, size_t entities)
{
    std::mt19937_64 rng(11);
    Registry reg;
    for (size_t k = 0; k < entities; ++k)
    {
        reg.registerEntity({"e", "E" + std::to_string(k),
                            static_cast<Category>(1 + rng() % 4),
                            static_cast<int64_t>(1 + rng() % 5),
                            static_cast<int64_t>(1 + rng() % 200)});
    }
    for (size_t i = 0; i < users; ++i)
    {
        auto id = "u" + std::to_string(i);
        reg.registerUser(fixture_identity(id), id);
        std::map<Category, int> r;
        for (auto c : kCategories)
        {
            r[c] = static_cast<int>(1 + rng() % 5);
        }
        reg.recordInterests(id, r);
        for (int v = 0; v < 5; ++v)
        {
            reg.appendVote(id, "E" + std::to_string(rng() % entities));
        }
    }
    return reg;
}

void
BM_SimilarityRowSerial(benchmark::State& state)
{
    auto m = randomMatrix(static_cast<size_t>(state.range(0)), 64);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(kernels::similarity_row_serial(m, 0));
    }
}

void
BM_SimilarityRowParallel(benchmark::State& state)
{
    auto m = randomMatrix(static_cast<size_t>(state.range(0)), 64);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(kernels::similarity_row_parallel(m, 0));
    }
}

void
BM_ContextMatrix(benchmark::State& state, kernels::Execution exec)
{
    std::mt19937_64 rng(3);
    std::vector<DestinationEntity> entities;
    for (int k = 0; k < 64; ++k)
    {
        entities.push_back({"e", "E" + std::to_string(k),
                            static_cast<Category>(1 + rng() % 4), 3, 50});
    }
    auto cols = kernels::EntityColumns::from(entities);
    std::vector<InterestRatings> users(static_cast<size_t>(state.range(0)));
    for (auto& u : users)
    {
        for (auto& r : u)
        {
            r = static_cast<int>(1 + rng() % 5);
        }
    }
    for (auto _ : state)
    {
        if (exec == kernels::Execution::Serial)
        {
            benchmark::DoNotOptimize(kernels::context_matrix_serial(cols, users));
        }
        else
        {
            benchmark::DoNotOptimize(
                kernels::context_matrix_parallel(cols, users));
        }
    }
}

void
BM_RecommendAll(benchmark::State& state, kernels::Execution exec)
{
    auto reg = randomRegistry(static_cast<size_t>(state.range(0)), 16);
    std::vector<std::string> ids;
    for (auto const& u : reg.users())
    {
        ids.push_back(u.uniqueId);
    }
    Recommender rec(reg, kernels::Execution::Serial);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(rec.recommendAll(ids, {}, {}, exec));
    }
}

} // namespace

BENCHMARK(BM_SimilarityRowSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_SimilarityRowParallel)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_ContextMatrix, serial, kernels::Execution::Serial)
    ->Arg(10000);
BENCHMARK_CAPTURE(BM_ContextMatrix, parallel, kernels::Execution::Parallel)
    ->Arg(10000);
BENCHMARK_CAPTURE(BM_RecommendAll, serial, kernels::Execution::Serial)
    ->Arg(200);
BENCHMARK_CAPTURE(BM_RecommendAll, parallel, kernels::Execution::Parallel)
    ->Arg(200);

BENCHMARK_MAIN();
