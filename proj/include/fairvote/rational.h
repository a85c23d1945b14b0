#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fairvote
{

// Non-negative fraction used for ledger rates so that inflation arithmetic
// stays in integers.
struct Rational
{
    int64_t num = 0;
    int64_t den = 1;

    // Accepts "p/q", a plain integer, or a decimal such as "0.0005".
    static Rational parse(std::string_view text);

    // floor(value * num / den), computed in 128-bit.
    int64_t floorMul(int64_t value) const;

    bool isValid() const;
    double toDouble() const;
    std::string toString() const; // canonical "num/den", reduced

    friend bool operator==(Rational const& a, Rational const& b);
    friend bool operator<(Rational const& a, Rational const& b);
};

} // namespace fairvote
