#include "toeplab/series.hpp"

#include "toeplab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace toeplab {

Series::Series(const Rational& c) : order_(unbounded)
{
    if (c != 0)
        c_.push_back(c);
}

Series::Series(std::vector<Rational> coeffs, int order) : c_(std::move(coeffs)), order_(order)
{
    if (order < 0)
        throw ContractViolation("negative truncation order");
    if (static_cast<int>(c_.size()) > order + 1)
        c_.resize(order + 1);
    trim();
}

Series Series::variable(int order, const Rational& scale)
{
    if (order < 1)
        return Series(std::vector<Rational>{}, order);
    return Series({Rational(0), scale}, order);
}

Rational Series::coeff(int k) const
{
    if (k < 0 || k >= static_cast<int>(c_.size()))
        return 0;
    return c_[k];
}

int Series::valuation() const
{
    for (size_t k = 0; k < c_.size(); ++k)
        if (c_[k] != 0)
            return static_cast<int>(k);
    return unbounded;
}

void Series::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

int Series::merged_order(const Series& a, const Series& b)
{
    if (a.is_exact())
        return b.order_;
    if (b.is_exact())
        return a.order_;
    if (a.order_ != b.order_)
        throw ContractViolation("mismatched truncation orders " + std::to_string(a.order_) + " and " +
                                std::to_string(b.order_));
    return a.order_;
}

Series Series::operator-() const
{
    Series r = *this;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

Series& Series::operator+=(const Series& o)
{
    order_ = merged_order(*this, o);
    size_t n = std::max(c_.size(), o.c_.size());
    if (order_ != unbounded)
        n = std::min<size_t>(n, order_ + 1);
    c_.resize(n);
    for (size_t k = 0; k < std::min(n, o.c_.size()); ++k)
        c_[k] += o.c_[k];
    trim();
    return *this;
}

Series& Series::operator-=(const Series& o)
{
    return *this += -o;
}

Series& Series::operator*=(const Series& o)
{
    int ord = merged_order(*this, o);
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        order_ = ord;
        return *this;
    }
    size_t n = c_.size() + o.c_.size() - 1;
    if (ord != unbounded)
        n = std::min<size_t>(n, ord + 1);
    std::vector<Rational> r(n);
    for (size_t i = 0; i < c_.size() && i < n; ++i) {
        if (c_[i] == 0)
            continue;
        for (size_t j = 0; j < o.c_.size() && i + j < n; ++j)
            r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    order_ = ord;
    trim();
    return *this;
}

Series& Series::operator*=(const Rational& q)
{
    for (auto& c : c_)
        c *= q;
    trim();
    return *this;
}

Series Series::derivative() const
{
    if (is_exact())
        return Series();
    std::vector<Rational> r;
    for (size_t k = 1; k < c_.size(); ++k)
        r.push_back(c_[k] * Rational(static_cast<long>(k)));
    return Series(std::move(r), std::max(order_ - 1, 0));
}

Series Series::truncated(int order) const
{
    if (order > order_)
        throw ContractViolation("cannot raise truncation order");
    return Series(c_, order);
}

double Series::evaluate(double t) const
{
    double acc = 0;
    for (size_t k = c_.size(); k-- > 0;)
        acc = acc * t + c_[k].get_d();
    return acc;
}

std::string Series::to_string(const std::string& var) const
{
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0)
            continue;
        Rational c = c_[k];
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        Rational a = abs(c);
        if (k == 0)
            os << format_rational(a);
        else {
            if (a != 1)
                os << format_rational(a) << "*";
            os << var;
            if (k > 1)
                os << "^" << k;
        }
        first = false;
    }
    if (first)
        os << "0";
    if (!is_exact())
        os << " + O(" << var << "^" << order_ + 1 << ")";
    return os.str();
}

bool operator==(const Series& a, const Series& b)
{
    return a.order_ == b.order_ && a.c_ == b.c_;
}

Series series_mul(const Series& a, const Series& b)
{
    return a * b;
}

Series series_inv(const Series& a)
{
    if (a.coeff(0) == 0)
        throw NotInvertible("series with zero constant term");
    if (a.is_exact())
        return Series(Rational(1) / a.coeff(0));
    int d = a.order();
    std::vector<Rational> b(d + 1);
    Rational inv0 = Rational(1) / a.coeff(0);
    b[0] = inv0;
    for (int k = 1; k <= d; ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += a.coeff(j) * b[k - j];
        b[k] = -inv0 * acc;
    }
    return Series(std::move(b), d);
}

Series series_exp(const Series& a)
{
    if (a.coeff(0) != 0)
        throw DomainError("exp requires zero constant term");
    if (a.is_exact())
        return Series(1);
    int d = a.order();
    std::vector<Rational> b(d + 1);
    b[0] = 1;
    // k b_k = sum_j j a_j b_{k-j}
    for (int k = 1; k <= d; ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += Rational(j) * a.coeff(j) * b[k - j];
        b[k] = acc / Rational(k);
    }
    return Series(std::move(b), d);
}

Series series_log(const Series& a)
{
    if (a.coeff(0) != 1)
        throw DomainError("log requires constant term 1");
    if (a.is_exact())
        return Series();
    int d = a.order();
    Series q = a.derivative() * series_inv(a.truncated(d - 1 < 0 ? 0 : d - 1));
    std::vector<Rational> b(d + 1);
    for (int k = 1; k <= d; ++k)
        b[k] = q.coeff(k - 1) / Rational(k);
    return Series(std::move(b), d);
}

} // namespace toeplab

namespace toeplab {

Series series_divide(const Series& a, const Series& b)
{
    if (b.is_zero())
        throw NotInvertible("division by a zero series");
    int v = b.valuation();
    if (!a.is_zero() && a.valuation() < v)
        throw NotInvertible("numerator valuation below the divisor's");
    auto shift = [v](const Series& s) {
        int order = s.is_exact() ? unbounded : s.order() - v;
        if (order < 0)
            throw NotInvertible("division leaves no known coefficients");
        std::vector<Rational> c;
        for (int k = v; k < static_cast<int>(s.coeffs().size()); ++k)
            c.push_back(s.coeffs()[k]);
        return Series(std::move(c), order);
    };
    Series num = shift(a);
    Series den = shift(b);
    if (den.is_exact() && den.coeffs().size() > 1)
        throw ContractViolation("exact quotient would be an infinite series");
    int order = std::min(num.order(), den.order());
    if (order != unbounded) {
        if (!num.is_exact())
            num = num.truncated(order);
        if (!den.is_exact())
            den = den.truncated(order);
    }
    return num * series_inv(den);
}

} // namespace toeplab
