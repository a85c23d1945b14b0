#pragma once

// Data-parallel kernels behind the recommender. Each kernel has a serial
// reference and an OpenMP version; both must produce identical output, which
// tests/test_kernels.cpp checks and bench/bench_kernels.cpp times.

#include "fairvote/registry.h"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fairvote::kernels
{

enum class Execution
{
    Serial,
    Parallel
};

int max_threads();

// Dense users x entities matrix of vote counts, row-major.
struct VoteMatrix
{
    size_t users = 0;
    size_t entities = 0;
    std::vector<double> counts;

    std::span<double const>
    row(size_t user) const
    {
        return {counts.data() + user * entities, entities};
    }
};

// Pearson similarity restricted to destinations both users voted for.
// nullopt with fewer than two co-voted destinations or zero variance there.
std::optional<double> co_voted_similarity(std::span<double const> u,
                                          std::span<double const> v);

// Similarity of `target` to every user (nullopt at the target itself).
std::vector<std::optional<double>>
similarity_row_serial(VoteMatrix const& m, size_t target);
std::vector<std::optional<double>>
similarity_row_parallel(VoteMatrix const& m, size_t target);
std::vector<std::optional<double>>
similarity_row(VoteMatrix const& m, size_t target, Execution exec);

// Raw context scores for users x entities, in tenths (exact integers).
struct EntityColumns
{
    std::vector<int64_t> priority;
    std::vector<int64_t> size;
    std::vector<size_t> categoryIndex;

    static EntityColumns from(std::span<DestinationEntity const> entities);
};

std::vector<int64_t>
context_matrix_serial(EntityColumns const& e,
                      std::span<InterestRatings const> users);
std::vector<int64_t>
context_matrix_parallel(EntityColumns const& e,
                        std::span<InterestRatings const> users);

} // namespace fairvote::kernels
