#include "fairvote/scoring.h"
#include "fairvote/errors.h"

#include <algorithm>
#include <cmath>

namespace fairvote
{

std::optional<double>
pearson_similarity(std::span<double const> u, std::span<double const> v)
{
    if (u.size() != v.size() || u.size() < 2)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "pearson needs two vectors of equal length >= 2, got " +
                        std::to_string(u.size()) + " and " +
                        std::to_string(v.size()));
    }
    auto constant = [](std::span<double const> x) {
        return std::all_of(x.begin(), x.end(),
                           [&](double e) { return e == x[0]; });
    };
    if (constant(u) || constant(v))
    {
        return std::nullopt;
    }

    double const n = static_cast<double>(u.size());
    double meanU = 0, meanV = 0;
    for (size_t i = 0; i < u.size(); ++i)
    {
        meanU += u[i];
        meanV += v[i];
    }
    meanU /= n;
    meanV /= n;

    double suv = 0, suu = 0, svv = 0;
    for (size_t i = 0; i < u.size(); ++i)
    {
        double du = u[i] - meanU;
        double dv = v[i] - meanV;
        suv += du * dv;
        suu += du * du;
        svv += dv * dv;
    }
    if (suu <= 0 || svv <= 0)
    {
        return std::nullopt;
    }
    return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

int64_t
context_score_tenths(int64_t priority, int64_t size, int64_t interest)
{
    return 2 * priority + 3 * size + 10 * interest;
}

double
context_score(int64_t priority, int64_t size, int64_t interest)
{
    return static_cast<double>(context_score_tenths(priority, size, interest)) /
           10.0;
}

std::vector<double>
normalize_minmax(std::span<double const> raw)
{
    if (raw.empty())
    {
        throw Error(ErrorCode::EmptyInput, "cannot normalize an empty list");
    }
    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    double const min = *lo;
    double const range = *hi - *lo;
    std::vector<double> out(raw.size(), 0.0);
    if (range > 0)
    {
        for (size_t i = 0; i < raw.size(); ++i)
        {
            out[i] = (raw[i] - min) / range;
        }
    }
    return out;
}

ScoreMap
normalize_minmax(ScoreMap const& raw)
{
    std::vector<double> values;
    values.reserve(raw.size());
    for (auto const& [key, x] : raw)
    {
        values.push_back(x);
    }
    auto norm = normalize_minmax(values);
    ScoreMap out;
    size_t i = 0;
    for (auto const& [key, x] : raw)
    {
        out.emplace(key, norm[i++]);
    }
    return out;
}

double
round_score(double x)
{
    // nearbyint honours the current rounding mode, which is round-to-even
    // unless someone changed it
    return std::nearbyint(x * 10000.0) / 10000.0;
}

} // namespace fairvote
