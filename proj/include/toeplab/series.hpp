#pragma once

#include "toeplab/rational.hpp"

#include <string>
#include <vector>

namespace toeplab {

// Truncated univariate power series over the rationals, dense storage.
//
// A series either carries a finite truncation order D (coefficients of t^k
// known for k <= D) or is an exact constant (order == unbounded). Exact
// constants combine with any order; two finite orders must agree.
class Series {
public:
    Series() : order_(unbounded) {}
    Series(const Rational& c);
    Series(long c) : Series(Rational(c)) {}
    Series(int c) : Series(Rational(c)) {}
    Series(std::vector<Rational> coeffs, int order);

    // scale * t at the given order.
    static Series variable(int order, const Rational& scale = 1);

    int order() const { return order_; }
    bool is_exact() const { return order_ == unbounded; }
    Rational coeff(int k) const;
    const std::vector<Rational>& coeffs() const { return c_; }
    int valuation() const;
    bool is_zero() const { return c_.empty(); }

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(const Series& o);
    Series& operator*=(const Rational& q);

    Series derivative() const;
    Series truncated(int order) const;
    double evaluate(double t) const;
    std::string to_string(const std::string& var = "t") const;

    friend bool operator==(const Series& a, const Series& b);

private:
    void trim();
    static int merged_order(const Series& a, const Series& b);

    std::vector<Rational> c_;
    int order_;
};

inline Series operator+(Series a, const Series& b) { return a += b; }
inline Series operator-(Series a, const Series& b) { return a -= b; }
inline Series operator*(const Series& a, const Series& b)
{
    Series r = a;
    r *= b;
    return r;
}
inline Series operator*(Series a, const Rational& q) { return a *= q; }
inline Series operator*(const Rational& q, Series a) { return a *= q; }

Series series_mul(const Series& a, const Series& b);
Series series_inv(const Series& a);
Series series_exp(const Series& a);
Series series_log(const Series& a);
// Exact quotient when b = t^v * unit and t^v divides a; the result loses v orders.
Series series_divide(const Series& a, const Series& b);

} // namespace toeplab
