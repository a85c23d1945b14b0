#include "fairvote/kernels.h"
#include "fairvote/scoring.h"
#include "oracles.h"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fairvote;
using namespace fairvote::kernels;

namespace
{

VoteMatrix
randomMatrix(std::mt19937_64& rng, size_t users, size_t entities)
{
    VoteMatrix m{users, entities, std::vector<double>(users * entities)};
    for (auto& c : m.counts)
    {
        c = rng() % 3 == 0 ? 0.0 : static_cast<double>(rng() % 6);
    }
    return m;
}

} // namespace

TEST_CASE("co-voted similarity uses only destinations both users voted for")
{
    std::vector<double> u{1, 0, 3, 2};
    std::vector<double> v{2, 5, 6, 0};
    // co-voted entries are positions 0 and 2: (1,3) vs (2,6)
    CHECK(*co_voted_similarity(u, v) == doctest::Approx(1.0));
    std::vector<double> w{0, 5, 6, 0};
    CHECK(!co_voted_similarity(u, w));
    std::vector<double> flat{2, 0, 2, 0};
    CHECK(!co_voted_similarity(flat, v));
}

TEST_CASE("co-voted similarity agrees with the oracle on the co-voted subset")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i)
    {
        auto m = randomMatrix(rng, 2, 2 + rng() % 12);
        auto u = m.row(0);
        auto v = m.row(1);
        std::vector<double> su;
        std::vector<double> sv;
        for (size_t j = 0; j < u.size(); ++j)
        {
            if (u[j] > 0 && v[j] > 0)
            {
                su.push_back(u[j]);
                sv.push_back(v[j]);
            }
        }
        auto got = co_voted_similarity(u, v);
        auto want = su.size() < 2 ? std::nullopt : oracle::pearson(su, sv);
        REQUIRE(got.has_value() == want.has_value());
        if (got)
        {
            REQUIRE(std::fabs(*got - *want) <= 1e-12);
        }
    }
}

TEST_CASE("similarity row: serial and parallel agree exactly")
{
    std::mt19937_64 rng(22);
    for (int i = 0; i < 50; ++i)
    {
        auto m = randomMatrix(rng, 1 + rng() % 60, 1 + rng() % 15);
        size_t target = rng() % m.users;
        auto s = similarity_row_serial(m, target);
        auto p = similarity_row_parallel(m, target);
        REQUIRE(s == p);
        REQUIRE(s == similarity_row(m, target, Execution::Serial));
        REQUIRE(!s[target]);
    }
}

TEST_CASE("context matrix: serial and parallel agree with the scalar score")
{
    std::mt19937_64 rng(23);
    std::vector<DestinationEntity> ents;
    for (int i = 0; i < 40; ++i)
    {
        ents.push_back({"e", "E" + std::to_string(i),
                        category_from_id(1 + static_cast<int>(rng() % 4)),
                        1 + static_cast<int64_t>(rng() % 10),
                        1 + static_cast<int64_t>(rng() % 500)});
    }
    std::vector<InterestRatings> users;
    for (int u = 0; u < 30; ++u)
    {
        InterestRatings r{};
        for (auto& x : r)
        {
            x = 1 + static_cast<int>(rng() % 5);
        }
        users.push_back(r);
    }
    auto cols = EntityColumns::from(ents);
    auto s = context_matrix_serial(cols, users);
    auto p = context_matrix_parallel(cols, users);
    REQUIRE(s == p);
    REQUIRE(s.size() == users.size() * ents.size());
    for (size_t u = 0; u < users.size(); ++u)
    {
        for (size_t e = 0; e < ents.size(); ++e)
        {
            auto k = users[u][category_index(ents[e].category)];
            REQUIRE(s[u * ents.size() + e] ==
                    context_score_tenths(ents[e].priority, ents[e].size, k));
        }
    }
    CHECK(max_threads() >= 1);
}
