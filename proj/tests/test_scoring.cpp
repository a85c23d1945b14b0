#include "fairvote/errors.h"
#include "fairvote/scoring.h"
#include "oracles.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fairvote;

namespace
{

std::vector<double>
randomVector(std::mt19937_64& rng, size_t n)
{
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    std::vector<double> v(n);
    for (auto& x : v)
    {
        x = d(rng);
    }
    return v;
}

} // namespace

TEST_CASE("pearson: hand-checked cases")
{
    std::vector<double> a{1, 2, 3};
    std::vector<double> b{2, 4, 6};
    std::vector<double> c{3, 2, 1};
    CHECK(*pearson_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*pearson_similarity(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(!pearson_similarity(std::vector<double>{5, 5, 5}, a));
    CHECK(!pearson_similarity(a, std::vector<double>{0, 0, 0}));

    auto mismatch = [] {
        std::vector<double> x{1, 2};
        std::vector<double> y{1, 2, 3};
        pearson_similarity(x, y);
    };
    CHECK_THROWS_AS(mismatch(), Error);
    std::vector<double> one{1};
    CHECK_THROWS_AS(pearson_similarity(one, one), Error);
}

TEST_CASE("pearson agrees with the computational-formula oracle")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i)
    {
        size_t n = 2 + rng() % 30;
        auto u = randomVector(rng, n);
        auto v = randomVector(rng, n);
        auto got = pearson_similarity(u, v);
        REQUIRE(got);
        auto want = oracle::pearson(u, v);
        REQUIRE(want);
        REQUIRE(std::fabs(*got - *want) <= 1e-12);
    }
}

TEST_CASE("property: pearson is symmetric, bounded and affine invariant")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    for (int i = 0; i < 500; ++i)
    {
        size_t n = 2 + rng() % 20;
        auto u = randomVector(rng, n);
        auto v = randomVector(rng, n);
        auto r = *pearson_similarity(u, v);
        REQUIRE(r >= -1.0);
        REQUIRE(r <= 1.0);
        REQUIRE(*pearson_similarity(v, u) == doctest::Approx(r).epsilon(1e-12));
        double a = scale(rng);
        double b = shift(rng);
        auto w = u;
        for (auto& x : w)
        {
            x = a * x + b;
        }
        REQUIRE(std::fabs(*pearson_similarity(w, v) - r) <= 1e-9);
        for (auto& x : w)
        {
            x = -x;
        }
        REQUIRE(std::fabs(*pearson_similarity(w, v) + r) <= 1e-9);
    }
}

TEST_CASE("context score for the size and priority tables")
{
    // (0.4p + 0.6s)/2 + interest, worked by hand
    CHECK(context_score(1, 6, 3) == doctest::Approx(5.0));
    CHECK(context_score(2, 5, 3) == doctest::Approx(4.9));
    CHECK(context_score(2, 4, 3) == doctest::Approx(4.6));
    CHECK(context_score(2, 1, 3) == doctest::Approx(3.7));
    CHECK(context_score(6, 5, 3) == doctest::Approx(5.7));
    CHECK(context_score(2, 13, 3) == doctest::Approx(7.3));
    CHECK(context_score_tenths(1, 6, 3) == 50);
    CHECK(context_score(1, 1, 4) == doctest::Approx(4.5));
}

TEST_CASE("property: unit steps move the context score by 0.2 and 0.3")
{
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i)
    {
        int64_t p = 1 + static_cast<int64_t>(rng() % 1000);
        int64_t s = 1 + static_cast<int64_t>(rng() % 100000);
        int64_t k = 1 + static_cast<int64_t>(rng() % 5);
        REQUIRE(context_score_tenths(p + 1, s, k) -
                    context_score_tenths(p, s, k) ==
                2);
        REQUIRE(context_score_tenths(p, s + 1, k) -
                    context_score_tenths(p, s, k) ==
                3);
        REQUIRE(std::fabs((context_score(p + 1, s, k) - context_score(p, s, k)) -
                          0.2) <= 1e-9);
        REQUIRE(std::fabs((context_score(p, s + 1, k) - context_score(p, s, k)) -
                          0.3) <= 1e-9);
    }
}

TEST_CASE("normalize_minmax")
{
    auto n = normalize_minmax(ScoreMap{{"a", 2.0}, {"b", 4.0}, {"c", 3.0}});
    CHECK(n.at("a") == 0.0);
    CHECK(n.at("b") == 1.0);
    CHECK(n.at("c") == doctest::Approx(0.5));

    auto flat = normalize_minmax(ScoreMap{{"a", 7.0}, {"b", 7.0}});
    CHECK(flat.at("a") == 0.0);
    CHECK(flat.at("b") == 0.0);
    CHECK(normalize_minmax(ScoreMap{{"x", -3.0}}).at("x") == 0.0);
    CHECK_THROWS_AS(normalize_minmax(ScoreMap{}), Error);
    try
    {
        normalize_minmax(std::vector<double>{});
    }
    catch (Error const& e)
    {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
}

TEST_CASE("property: normalization is bounded, order preserving and "
          "idempotent")
{
    std::mt19937_64 rng(14);
    for (int i = 0; i < 1000; ++i)
    {
        size_t n = 1 + rng() % 25;
        auto raw = randomVector(rng, n);
        if (rng() % 5 == 0)
        {
            raw.assign(n, raw[0]);
        }
        auto out = normalize_minmax(raw);
        REQUIRE(out.size() == n);
        bool constant = std::all_of(raw.begin(), raw.end(),
                                    [&](double x) { return x == raw[0]; });
        for (size_t a = 0; a < n; ++a)
        {
            REQUIRE(out[a] >= 0.0);
            REQUIRE(out[a] <= 1.0);
            if (constant)
            {
                REQUIRE(out[a] == 0.0);
            }
            for (size_t b = 0; b < n; ++b)
            {
                if (raw[a] < raw[b])
                {
                    REQUIRE(out[a] <= out[b]);
                }
            }
        }
        if (!constant)
        {
            REQUIRE(*std::min_element(out.begin(), out.end()) == 0.0);
            REQUIRE(*std::max_element(out.begin(), out.end()) == 1.0);
        }
        auto twice = normalize_minmax(out);
        for (size_t a = 0; a < n; ++a)
        {
            REQUIRE(std::fabs(twice[a] - out[a]) <= 1e-12);
        }
    }
}

TEST_CASE("round_score")
{
    CHECK(round_score(0.66666666) == 0.6667);
    CHECK(round_score(12.0 / 13.0) == 0.9231);
    CHECK(round_score(1.0) == 1.0);
    CHECK(round_score(0.0) == 0.0);
    CHECK(round_score(0.12345) == doctest::Approx(0.1234).epsilon(1e-12));
}
