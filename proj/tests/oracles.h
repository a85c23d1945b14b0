#pragma once

// Independent reference computations used only by tests. None of these call
// into the library code paths they are used to check.

#include "fairvote/ledger.h"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle
{

// Pearson via the single-pass computational formula
//   (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2)(n Syy - Sy^2))
// in long double; nullopt when a denominator factor vanishes.
inline std::optional<double>
pearson(std::vector<double> const& x, std::vector<double> const& y)
{
    long double n = x.size(), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i)
    {
        sx += x[i];
        sy += y[i];
        sxx += (long double)x[i] * x[i];
        syy += (long double)y[i] * y[i];
        sxy += (long double)x[i] * y[i];
    }
    long double vx = n * sxx - sx * sx;
    long double vy = n * syy - sy * sy;
    if (vx == 0 || vy == 0)
    {
        return std::nullopt;
    }
    return static_cast<double>((n * sxy - sx * sy) / std::sqrt(vx * vy));
}

// Largest x with x * totalWeight <= pool * weight, found by counting up.
inline int64_t
brute_share(int64_t pool, int64_t weight, int64_t totalWeight)
{
    int64_t x = 0;
    while ((x + 1) * totalWeight <= pool * weight)
    {
        ++x;
    }
    return x;
}

// Balance obtained by folding an account's receipts onto its genesis balance.
inline int64_t
replay_balance(int64_t genesis, std::string const& key,
               std::vector<fairvote::Receipt> const& receipts)
{
    int64_t b = genesis;
    for (auto const& r : receipts)
    {
        if (r.source == key)
        {
            b -= r.amount + r.fee;
        }
        if (r.destination == key)
        {
            b += r.amount;
        }
    }
    return b;
}

// Counting oracle for selection rates over explicit vectors.
struct Population
{
    std::vector<int> a; // sensitive label
    std::vector<int> y; // qualification
    std::vector<int> c; // selected
};

inline std::optional<std::pair<double, double>>
rates(Population const& p)
{
    double n[2] = {0, 0}, s[2] = {0, 0};
    for (size_t i = 0; i < p.a.size(); ++i)
    {
        n[p.a[i]] += 1;
        s[p.a[i]] += p.c[i];
    }
    if (n[0] == 0 || n[1] == 0)
    {
        return std::nullopt;
    }
    return std::make_pair(s[0] / n[0], s[1] / n[1]);
}

inline std::optional<double>
eo_gap(Population const& p)
{
    double n[2] = {0, 0}, s[2] = {0, 0};
    for (size_t i = 0; i < p.a.size(); ++i)
    {
        if (p.y[i] == 1)
        {
            n[p.a[i]] += 1;
            s[p.a[i]] += p.c[i];
        }
    }
    if (n[0] == 0 || n[1] == 0)
    {
        return std::nullopt;
    }
    return std::fabs(s[0] / n[0] - s[1] / n[1]);
}

} // namespace oracle
