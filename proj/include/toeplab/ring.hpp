#pragma once

// Free-function ring traits used by the generic engines. Every coefficient
// ring R provides is_zero, is_unit, inv, to_string, truncation_order and
// lift<R>(Rational).

#include "toeplab/errors.hpp"
#include "toeplab/graded_poly.hpp"
#include "toeplab/laurent.hpp"
#include "toeplab/rational.hpp"
#include "toeplab/series.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace toeplab {

inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_unit(const Rational& q) { return q != 0; }
inline Rational inv(const Rational& q)
{
    if (q == 0)
        throw NotInvertible("zero rational");
    return Rational(1) / q;
}
inline std::string to_string(const Rational& q) { return format_rational(q); }
inline int truncation_order(const Rational&) { return unbounded; }

inline bool is_zero(double d) { return d == 0.0; }
inline bool is_unit(double d) { return d != 0.0; }
inline double inv(double d)
{
    if (d == 0.0)
        throw NotInvertible("zero float");
    return 1.0 / d;
}
inline std::string to_string(double d)
{
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}
inline int truncation_order(double) { return unbounded; }

inline bool is_zero(const Series& s) { return s.is_zero(); }
inline bool is_unit(const Series& s) { return s.coeff(0) != 0; }
inline Series inv(const Series& s) { return series_inv(s); }
inline std::string to_string(const Series& s) { return s.to_string(); }
inline int truncation_order(const Series& s) { return s.order(); }

inline bool is_zero(const LaurentEps& a) { return a.is_zero(); }
inline bool is_unit(const LaurentEps& a) { return !a.is_zero(); }
inline LaurentEps inv(const LaurentEps& a) { return laurent_inv(a); }
inline std::string to_string(const LaurentEps& a) { return a.to_string(); }
inline int truncation_order(const LaurentEps& a) { return a.precision(); }

inline bool is_zero(const GradedPoly& p) { return p.is_zero(); }
inline bool is_unit(const GradedPoly& p) { return p.constant_term() != 0; }
inline GradedPoly inv(const GradedPoly& p) { return graded_inv(p); }
inline std::string to_string(const GradedPoly& p) { return p.to_string(); }
inline int truncation_order(const GradedPoly& p) { return p.order(); }

template <class R>
R lift(const Rational& q)
{
    return R(q);
}

template <>
inline double lift<double>(const Rational& q)
{
    return q.get_d();
}

template <class R>
R lift(long v)
{
    return lift<R>(Rational(v));
}

template <class R>
R divide(const R& a, const R& b)
{
    return a * inv(b);
}

// Exact quotient a / b. Series divisors may carry a power of t that divides a.
inline Rational exact_divide(const Rational& a, const Rational& b) { return a * inv(b); }
inline double exact_divide(double a, double b) { return a * inv(b); }
inline Series exact_divide(const Series& a, const Series& b) { return series_divide(a, b); }
inline LaurentEps exact_divide(const LaurentEps& a, const LaurentEps& b) { return a * laurent_inv(b); }
inline GradedPoly exact_divide(const GradedPoly& a, const GradedPoly& b) { return a * graded_inv(b); }

// Zero with no truncation: skipping it loses no order information.
template <class R>
bool is_exact_zero(const R& a)
{
    return is_zero(a) && truncation_order(a) == unbounded;
}

// Zero in exact rings; within a fixed absolute tolerance in floating point.
template <class R>
bool is_negligible(const R& a)
{
    return is_zero(a);
}
inline bool is_negligible(double a) { return std::abs(a) <= 1e-9; }

// Lowers a finite Series order; every other ring is returned unchanged.
inline Rational truncated_to(const Rational& a, int) { return a; }
inline double truncated_to(double a, int) { return a; }
inline Series truncated_to(const Series& a, int order)
{
    if (a.is_exact() || order >= a.order())
        return a;
    return a.truncated(order);
}
inline LaurentEps truncated_to(const LaurentEps& a, int) { return a; }
inline GradedPoly truncated_to(const GradedPoly& a, int) { return a; }

template <class R>
R power(const R& a, int k)
{
    R r = lift<R>(1);
    for (int i = 0; i < k; ++i)
        r = r * a;
    return r;
}

// p_0..p_kmax of t = (t_1, t_2, ...), stored with t[0] = t_1; entries beyond
// t.size() count as zero. Uses k p_k = sum_i i t_i p_{k-i}.
template <class R>
std::vector<R> schur_table(const std::vector<R>& t, int kmax)
{
    std::vector<R> p;
    p.reserve(kmax + 1);
    p.push_back(lift<R>(1));
    for (int k = 1; k <= kmax; ++k) {
        R acc = lift<R>(0);
        for (int i = 1; i <= k && i <= static_cast<int>(t.size()); ++i) {
            if (is_zero(t[i - 1]))
                continue;
            acc = acc + lift<R>(Rational(i)) * t[i - 1] * p[k - i];
        }
        p.push_back(acc * lift<R>(rat(1, k)));
    }
    return p;
}

// Elementary Schur polynomial p_k(t); zero for k < 0.
template <class R>
R schur_p(const std::vector<R>& t, int k)
{
    if (k < 0)
        return lift<R>(0);
    return schur_table(t, k).back();
}

} // namespace toeplab
