#include "fairvote/kernels.h"
#include "fairvote/scoring.h"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace fairvote::kernels
{

int
max_threads()
{
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

std::optional<double>
co_voted_similarity(std::span<double const> u, std::span<double const> v)
{
    std::vector<double> cu, cv;
    for (size_t i = 0; i < u.size() && i < v.size(); ++i)
    {
        if (u[i] > 0 && v[i] > 0)
        {
            cu.push_back(u[i]);
            cv.push_back(v[i]);
        }
    }
    if (cu.size() < 2)
    {
        return std::nullopt;
    }
    return pearson_similarity(cu, cv);
}

std::vector<std::optional<double>>
similarity_row_serial(VoteMatrix const& m, size_t target)
{
    std::vector<std::optional<double>> out(m.users);
    auto t = m.row(target);
    for (size_t j = 0; j < m.users; ++j)
    {
        if (j != target)
        {
            out[j] = co_voted_similarity(t, m.row(j));
        }
    }
    return out;
}

std::vector<std::optional<double>>
similarity_row_parallel(VoteMatrix const& m, size_t target)
{
    std::vector<std::optional<double>> out(m.users);
    auto t = m.row(target);
    auto const n = static_cast<std::ptrdiff_t>(m.users);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j)
    {
        if (static_cast<size_t>(j) != target)
        {
            out[j] = co_voted_similarity(t, m.row(j));
        }
    }
    return out;
}

std::vector<std::optional<double>>
similarity_row(VoteMatrix const& m, size_t target, Execution exec)
{
    return exec == Execution::Parallel ? similarity_row_parallel(m, target)
                                       : similarity_row_serial(m, target);
}

EntityColumns
EntityColumns::from(std::span<DestinationEntity const> entities)
{
    EntityColumns c;
    for (auto const& e : entities)
    {
        c.priority.push_back(e.priority);
        c.size.push_back(e.size);
        c.categoryIndex.push_back(category_index(e.category));
    }
    return c;
}

std::vector<int64_t>
context_matrix_serial(EntityColumns const& e,
                      std::span<InterestRatings const> users)
{
    size_t const cols = e.priority.size();
    std::vector<int64_t> out(users.size() * cols);
    for (size_t u = 0; u < users.size(); ++u)
    {
        for (size_t k = 0; k < cols; ++k)
        {
            out[u * cols + k] = context_score_tenths(
                e.priority[k], e.size[k], users[u][e.categoryIndex[k]]);
        }
    }
    return out;
}

std::vector<int64_t>
context_matrix_parallel(EntityColumns const& e,
                        std::span<InterestRatings const> users)
{
    size_t const cols = e.priority.size();
    std::vector<int64_t> out(users.size() * cols);
    auto const n = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t u = 0; u < n; ++u)
    {
        for (size_t k = 0; k < cols; ++k)
        {
            out[u * cols + k] = context_score_tenths(
                e.priority[k], e.size[k], users[u][e.categoryIndex[k]]);
        }
    }
    return out;
}

} // namespace fairvote::kernels
