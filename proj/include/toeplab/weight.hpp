#pragma once

#include "toeplab/errors.hpp"
#include "toeplab/ring.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toeplab {

// The symbol
//   rho(z) = exp(P1(z) + P2(1/z)) z^gamma prod_i (1 - d_i z)^{gp_i} (1 - 1/(d_i z))^{gpp_i}
// with P1(z) = sum u_i z^i / i and P2(z) = sum u_{-i} z^i / i.
// u_plus[i-1] = u_i and u_minus[i-1] = u_{-i}.
template <class R>
struct Weight {
    std::vector<R> u_plus;
    std::vector<R> u_minus;
    int gamma = 0;
    Rational d1 = 0, d2 = 0;
    Rational gp1 = 0, gp2 = 0, gpp1 = 0, gpp2 = 0;

    int N1() const { return static_cast<int>(u_plus.size()); }
    int N2() const { return static_cast<int>(u_minus.size()); }
};

enum class Mode { exact, numeric };

// Rational-parameter weight as read from a weight file.
struct WeightSpec : Weight<Rational> {
    Mode mode = Mode::exact;
};

enum class CaseId { case1, case2, case3, self_dual };

struct Abc {
    Rational a = 0, b = 0, c = 0;
    friend bool operator==(const Abc&, const Abc&) = default;
};

struct CaseTag {
    CaseId id = CaseId::case3;
    Abc abc;
    std::optional<Abc> alternate_abc;
    // The active binomial parameter in Case 2.
    Rational d = 0;
};

std::string case_name(CaseId id);

// Strict JSON parse; unknown fields, malformed rationals and wrong types raise ParseError.
WeightSpec parse_weight_json(const std::string& text);
WeightSpec load_weight_file(const std::string& path);

template <class R>
Weight<R> lift_weight(const Weight<Rational>& w)
{
    Weight<R> r;
    for (const auto& u : w.u_plus)
        r.u_plus.push_back(lift<R>(u));
    for (const auto& u : w.u_minus)
        r.u_minus.push_back(lift<R>(u));
    r.gamma = w.gamma;
    r.d1 = w.d1;
    r.d2 = w.d2;
    r.gp1 = w.gp1;
    r.gp2 = w.gp2;
    r.gpp1 = w.gpp1;
    r.gpp2 = w.gpp2;
    return r;
}

// Copies the binomial data and gamma of w, with the given exponents.
template <class R>
Weight<R> with_exponents(const Weight<Rational>& w, std::vector<R> u_plus, std::vector<R> u_minus)
{
    Weight<R> r;
    r.u_plus = std::move(u_plus);
    r.u_minus = std::move(u_minus);
    r.gamma = w.gamma;
    r.d1 = w.d1;
    r.d2 = w.d2;
    r.gp1 = w.gp1;
    r.gp2 = w.gp2;
    r.gpp1 = w.gpp1;
    r.gpp2 = w.gpp2;
    return r;
}

namespace detail {

struct FactorData {
    Rational d, gp, gpp;
    bool active() const { return d != 0 && (gp != 0 || gpp != 0); }
};

template <class R>
std::vector<FactorData> factors(const Weight<R>& w)
{
    return {{w.d1, w.gp1, w.gpp1}, {w.d2, w.gp2, w.gpp2}};
}

CaseTag classify_from_factors(const std::vector<FactorData>& fs, int n1, int n2, bool symmetric_u, int gamma);

} // namespace detail

template <class R>
bool ring_equal(const R& a, const R& b)
{
    return is_zero(a - b);
}

// Case of the weight and its (a, b, c) triple.
template <class R>
CaseTag classify_case(const Weight<R>& w)
{
    bool symmetric = w.u_plus.size() == w.u_minus.size();
    for (size_t i = 0; symmetric && i < w.u_plus.size(); ++i)
        symmetric = ring_equal(w.u_plus[i], w.u_minus[i]);
    return detail::classify_from_factors(detail::factors(w), w.N1(), w.N2(), symmetric, w.gamma);
}

// (a, b, c) is admissible when a d^2 + b d + c = 0 for every active factor and not all are zero.
template <class R>
bool admissible_abc(const Weight<R>& w, const Abc& t)
{
    if (t.a == 0 && t.b == 0 && t.c == 0)
        return false;
    for (const auto& f : detail::factors(w))
        if (f.active() && t.a * f.d * f.d + t.b * f.d + t.c != 0)
            return false;
    return true;
}

// z <-> 1/z: u_i <-> u_{-i}, gamma <-> -gamma, d_i <-> 1/d_i, gp_i <-> gpp_i.
template <class R>
Weight<R> dual_weight(const Weight<R>& w)
{
    Weight<R> r = w;
    std::swap(r.u_plus, r.u_minus);
    r.gamma = -w.gamma;
    auto flip = [](const Rational& d, const Rational& gp, const Rational& gpp) -> Rational {
        if (d == 0) {
            if (gp != 0 || gpp != 0)
                throw DomainError("dual of a binomial factor with d = 0");
            return Rational(0);
        }
        return Rational(1) / d;
    };
    r.d1 = flip(w.d1, w.gp1, w.gpp1);
    r.d2 = flip(w.d2, w.gp2, w.gpp2);
    std::swap(r.gp1, r.gpp1);
    std::swap(r.gp2, r.gpp2);
    return r;
}

inline int valuation(const Rational& q) { return q == 0 ? unbounded : 0; }
inline int valuation(const Series& s) { return s.valuation(); }
inline int valuation(const GradedPoly& p) { return p.valuation(); }

// Exact Fourier moments mu_k = [z^{-k}] rho(z), cached.
//
// Each side e^{P(z)} contributes p_a(u_1, u_2/2, ...) z^{+-a}. Truncated rings
// bound the number of surviving terms by D * max_i(i / val(u_i)); a side whose
// exponents have valuation zero is allowed only when the other side is trivial.
template <class R>
class ExactMoments {
public:
    explicit ExactMoments(const Weight<R>& w)
    {
        for (const auto& f : detail::factors(w)) {
            if (f.d == 0 && f.gpp != 0)
                throw DomainError("binomial factor in 1/z with d = 0");
            for (const Rational* g : {&f.gp, &f.gpp})
                if (*g < 0 || g->get_den() != 1)
                    throw UnsupportedExactWeight("exact mode needs non-negative integer binomial exponents");
        }
        poly_[0] = 1;
        for (const auto& f : detail::factors(w)) {
            if (f.d == 0)
                continue;
            long gp = f.gp.get_num().get_si();
            long gpp = f.gpp.get_num().get_si();
            std::map<int, Rational> fac;
            for (long j = 0; j <= gp; ++j)
                fac[static_cast<int>(j)] += binomial(gp, j) * pow_rational(-f.d, j);
            std::map<int, Rational> fac2;
            for (const auto& [e, c] : fac)
                for (long j = 0; j <= gpp; ++j)
                    fac2[e - static_cast<int>(j)] += c * binomial(gpp, j) * pow_rational(-Rational(1) / f.d, j);
            std::map<int, Rational> next;
            for (const auto& [e1, c1] : poly_)
                for (const auto& [e2, c2] : fac2)
                    next[e1 + e2] += c1 * c2;
            poly_.clear();
            for (const auto& [e, c] : next)
                if (c != 0)
                    poly_[e] = c;
        }
        gamma_ = w.gamma;
        plus_ = scaled(w.u_plus);
        minus_ = scaled(w.u_minus);
        bound_plus_ = side_bound(w.u_plus, w.u_minus);
        bound_minus_ = side_bound(w.u_minus, w.u_plus);
        if (bound_plus_ < 0 && bound_minus_ < 0)
            throw UnsupportedExactWeight("both exponential sides are untruncated; use a series ring");
    }

    const R& operator()(int k) const
    {
        auto it = cache_.find(k);
        if (it != cache_.end())
            return it->second;
        R acc = lift<R>(0);
        // a - b + e + gamma = -k
        if (bound_minus_ >= 0) {
            for (int b = 0; b <= bound_minus_; ++b)
                for (const auto& [e, c] : poly_) {
                    int a = b - k - gamma_ - e;
                    if (a < 0 || (bound_plus_ >= 0 && a > bound_plus_))
                        continue;
                    acc = acc + lift<R>(c) * p_plus(a) * p_minus(b);
                }
        } else {
            for (int a = 0; a <= bound_plus_; ++a)
                for (const auto& [e, c] : poly_) {
                    int b = a + k + gamma_ + e;
                    if (b < 0)
                        continue;
                    acc = acc + lift<R>(c) * p_plus(a) * p_minus(b);
                }
        }
        return cache_.emplace(k, acc).first->second;
    }

    const std::map<int, Rational>& binomial_polynomial() const { return poly_; }

private:
    static Rational pow_rational(const Rational& q, long k)
    {
        Rational r = 1;
        for (long i = 0; i < k; ++i)
            r *= q;
        return r;
    }

    static std::vector<R> scaled(const std::vector<R>& u)
    {
        std::vector<R> t;
        for (size_t i = 0; i < u.size(); ++i)
            t.push_back(u[i] * lift<R>(rat(1, static_cast<long>(i + 1))));
        return t;
    }

    // -1 means untruncated (valid only when the opposite side is trivial).
    static int side_bound(const std::vector<R>& u, const std::vector<R>& other)
    {
        bool trivial = std::all_of(u.begin(), u.end(), [](const R& x) { return is_zero(x); });
        if (trivial)
            return 0;
        int order = unbounded;
        for (const auto& x : u)
            order = std::min(order, truncation_order(x));
        for (const auto& x : other)
            order = std::min(order, truncation_order(x));
        Rational ratio = 0;
        for (size_t i = 0; i < u.size(); ++i) {
            if (is_zero(u[i]))
                continue;
            int v = valuation(u[i]);
            if (v == 0 || order == unbounded)
                return -1;
            ratio = std::max(ratio, Rational(static_cast<long>(i + 1), v));
        }
        Rational j = ratio * order;
        return static_cast<int>(mpz_class(j.get_num() / j.get_den()).get_si());
    }

    const R& p_plus(int a) const { return extend(plus_, p_plus_, a); }
    const R& p_minus(int b) const { return extend(minus_, p_minus_, b); }

    static const R& extend(const std::vector<R>& t, std::vector<R>& p, int k)
    {
        if (p.empty())
            p.push_back(lift<R>(1));
        while (static_cast<int>(p.size()) <= k) {
            int m = static_cast<int>(p.size());
            R acc = lift<R>(0);
            for (int i = 1; i <= m && i <= static_cast<int>(t.size()); ++i)
                if (!is_zero(t[i - 1]))
                    acc = acc + lift<R>(Rational(i)) * t[i - 1] * p[m - i];
            p.push_back(acc * lift<R>(rat(1, m)));
        }
        return p[k];
    }

    std::map<int, Rational> poly_;
    int gamma_ = 0;
    std::vector<R> plus_, minus_;
    int bound_plus_ = 0, bound_minus_ = 0;
    mutable std::vector<R> p_plus_, p_minus_;
    mutable std::map<int, R> cache_;
};

template <class R>
R fourier_moment(const Weight<R>& w, int k)
{
    return ExactMoments<R>(w)(k);
}

// rho evaluated at a point of the unit circle, parameters converted to double.
std::complex<double> evaluate_symbol(const WeightSpec& w, std::complex<double> z);

// M-point trapezoid approximation of [z^{-k}] rho(z) on the unit circle.
double numeric_moment(const WeightSpec& w, int k, int M = 512);

// Numeric moment table for |k| <= kmax.
class NumericMoments {
public:
    NumericMoments(const WeightSpec& w, int kmax, int M = 512);
    double operator()(int k) const;

private:
    int kmax_;
    std::vector<double> mu_;
};

// Times (t_i, s_i), i = 1..bound, at which exp(sum t_i z^i - s_i z^{-i}) equals rho / z^gamma.
struct LocusTimes {
    std::vector<Rational> t, s;
};
LocusTimes locus_times(const Weight<Rational>& w, int bound);

} // namespace toeplab
