#pragma once

#include "toeplab/rational.hpp"

#include <string>
#include <vector>

namespace toeplab {

// Truncated Laurent series in eps: sum_{k=low}^{hi-1} c_k eps^k + O(eps^hi).
//
// hi == unbounded marks an exact Laurent polynomial. A nonzero value always
// has a nonzero coefficient at its lowest exponent.
class LaurentEps {
public:
    LaurentEps() : low_(0), hi_(unbounded) {}
    LaurentEps(const Rational& c);
    LaurentEps(long c) : LaurentEps(Rational(c)) {}
    LaurentEps(int c) : LaurentEps(Rational(c)) {}
    LaurentEps(int low, std::vector<Rational> coeffs, int hi = unbounded);

    // eps^power, exact.
    static LaurentEps monomial(int power, const Rational& c = 1);
    // O(eps^hi).
    static LaurentEps big_o(int hi);

    bool is_exact() const { return hi_ == unbounded; }
    bool is_zero() const { return c_.empty(); }
    // Lowest exponent with nonzero coefficient; precision() for zero.
    int valuation() const { return c_.empty() ? hi_ : low_; }
    int precision() const { return hi_; }
    Rational coeff(int k) const;
    int term_count() const;
    Rational leading() const { return c_.empty() ? Rational(0) : c_.front(); }

    // Drops every term at exponent >= hi.
    LaurentEps with_precision(int hi) const;

    LaurentEps operator-() const;
    LaurentEps& operator+=(const LaurentEps& o);
    LaurentEps& operator-=(const LaurentEps& o);
    LaurentEps& operator*=(const LaurentEps& o);

    std::string to_string(const std::string& var = "eps") const;

    friend bool operator==(const LaurentEps& a, const LaurentEps& b);

private:
    void normalize();

    int low_;
    std::vector<Rational> c_;
    int hi_;
};

inline LaurentEps operator+(LaurentEps a, const LaurentEps& b) { return a += b; }
inline LaurentEps operator-(LaurentEps a, const LaurentEps& b) { return a -= b; }
inline LaurentEps operator*(LaurentEps a, const LaurentEps& b) { return a *= b; }

LaurentEps laurent_inv(const LaurentEps& a);

} // namespace toeplab
