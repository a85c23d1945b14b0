#include "fairvote/rational.h"
#include "fairvote/errors.h"

#include <charconv>
#include <numeric>

namespace fairvote
{

namespace
{

int64_t
parseInt(std::string_view text)
{
    int64_t value = 0;
    auto const* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
    {
        throw Error(ErrorCode::InvalidParams,
                    "not an integer: '" + std::string(text) + "'");
    }
    return value;
}

Rational
reduced(int64_t num, int64_t den)
{
    if (den <= 0 || num < 0)
    {
        throw Error(ErrorCode::InvalidParams,
                    "rational must be non-negative with positive denominator");
    }
    auto g = std::gcd(num, den);
    if (g == 0)
    {
        g = 1;
    }
    return Rational{num / g, den / g};
}

} // namespace

Rational
Rational::parse(std::string_view text)
{
    if (auto slash = text.find('/'); slash != std::string_view::npos)
    {
        return reduced(parseInt(text.substr(0, slash)),
                       parseInt(text.substr(slash + 1)));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos)
    {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 17)
        {
            throw Error(ErrorCode::InvalidParams,
                        "bad decimal: '" + std::string(text) + "'");
        }
        int64_t den = 1;
        for (size_t i = 0; i < frac.size(); ++i)
        {
            den *= 10;
        }
        int64_t w = whole.empty() ? 0 : parseInt(whole);
        int64_t f = parseInt(frac);
        if (w < 0 || f < 0)
        {
            throw Error(ErrorCode::InvalidParams,
                        "bad decimal: '" + std::string(text) + "'");
        }
        return reduced(w * den + f, den);
    }
    return reduced(parseInt(text), 1);
}

int64_t
Rational::floorMul(int64_t value) const
{
    __int128 p = static_cast<__int128>(value) * num;
    __int128 q = p / den;
    if (p % den != 0 && p < 0)
    {
        --q;
    }
    return static_cast<int64_t>(q);
}

bool
Rational::isValid() const
{
    return den > 0 && num >= 0;
}

double
Rational::toDouble() const
{
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string
Rational::toString() const
{
    auto r = reduced(num, den);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

bool
operator==(Rational const& a, Rational const& b)
{
    return static_cast<__int128>(a.num) * b.den ==
           static_cast<__int128>(b.num) * a.den;
}

bool
operator<(Rational const& a, Rational const& b)
{
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
}

} // namespace fairvote
