#pragma once

#include <gmpxx.h>

#include <limits>
#include <string>

namespace toeplab {

using Rational = mpq_class;
using Integer = mpz_class;

// Sentinel for "no truncation" in orders and precisions.
inline constexpr int unbounded = std::numeric_limits<int>::max() / 4;

inline Rational rat(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q" with q > 0 after normalization; anything else throws ParseError.
Rational parse_rational(const std::string& text);

// Lowest-terms "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& q);

Rational factorial(unsigned k);
Rational binomial(long n, long k);

} // namespace toeplab
