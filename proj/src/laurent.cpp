#include "toeplab/laurent.hpp"

#include "toeplab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace toeplab {

namespace {

int clamp_hi(long v)
{
    return v >= unbounded ? unbounded : static_cast<int>(v);
}

} // namespace

LaurentEps::LaurentEps(const Rational& c) : low_(0), hi_(unbounded)
{
    if (c != 0)
        c_.push_back(c);
}

LaurentEps::LaurentEps(int low, std::vector<Rational> coeffs, int hi) : low_(low), c_(std::move(coeffs)), hi_(hi)
{
    normalize();
}

LaurentEps LaurentEps::monomial(int power, const Rational& c)
{
    return LaurentEps(power, {c});
}

LaurentEps LaurentEps::big_o(int hi)
{
    return LaurentEps(0, {}, hi);
}

void LaurentEps::normalize()
{
    if (hi_ != unbounded) {
        long keep = static_cast<long>(hi_) - low_;
        if (keep <= 0)
            c_.clear();
        else if (static_cast<long>(c_.size()) > keep)
            c_.resize(keep);
    }
    size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0)
        ++lead;
    if (lead == c_.size()) {
        c_.clear();
        low_ = 0;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + lead);
        low_ += static_cast<int>(lead);
    }
    while (c_.back() == 0)
        c_.pop_back();
}

int LaurentEps::term_count() const
{
    return static_cast<int>(std::count_if(c_.begin(), c_.end(), [](const Rational& c) { return c != 0; }));
}

Rational LaurentEps::coeff(int k) const
{
    long i = static_cast<long>(k) - low_;
    if (i < 0 || i >= static_cast<long>(c_.size()))
        return 0;
    return c_[i];
}

LaurentEps LaurentEps::with_precision(int hi) const
{
    return LaurentEps(low_, c_, std::min(hi, hi_));
}

LaurentEps LaurentEps::operator-() const
{
    LaurentEps r = *this;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

LaurentEps& LaurentEps::operator+=(const LaurentEps& o)
{
    int hi = std::min(hi_, o.hi_);
    if (c_.empty() && o.c_.empty()) {
        hi_ = hi;
        return *this;
    }
    int lo = c_.empty() ? o.low_ : (o.c_.empty() ? low_ : std::min(low_, o.low_));
    int top = std::max(c_.empty() ? lo : low_ + static_cast<int>(c_.size()),
                       o.c_.empty() ? lo : o.low_ + static_cast<int>(o.c_.size()));
    std::vector<Rational> r(top - lo);
    for (size_t k = 0; k < c_.size(); ++k)
        r[low_ - lo + k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k)
        r[o.low_ - lo + k] += o.c_[k];
    *this = LaurentEps(lo, std::move(r), hi);
    return *this;
}

LaurentEps& LaurentEps::operator-=(const LaurentEps& o)
{
    return *this += -o;
}

LaurentEps& LaurentEps::operator*=(const LaurentEps& o)
{
    int va = valuation();
    int vb = o.valuation();
    if ((c_.empty() && is_exact()) || (o.c_.empty() && o.is_exact())) {
        *this = LaurentEps();
        return *this;
    }
    int hi = std::min(clamp_hi(static_cast<long>(va) + o.hi_), clamp_hi(static_cast<long>(vb) + hi_));
    if (c_.empty() || o.c_.empty()) {
        *this = big_o(hi);
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1);
    long limit = static_cast<long>(hi) - (low_ + o.low_);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) {
            if (static_cast<long>(i + j) >= limit)
                break;
            r[i + j] += c_[i] * o.c_[j];
        }
    *this = LaurentEps(low_ + o.low_, std::move(r), hi);
    return *this;
}

std::string LaurentEps::to_string(const std::string& var) const
{
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0)
            continue;
        int e = low_ + static_cast<int>(k);
        Rational a = abs(c_[k]);
        if (!first)
            os << (c_[k] < 0 ? " - " : " + ");
        else if (c_[k] < 0)
            os << "-";
        if (e == 0)
            os << format_rational(a);
        else {
            if (a != 1)
                os << format_rational(a) << "*";
            os << var;
            if (e != 1)
                os << "^" << e;
        }
        first = false;
    }
    if (!is_exact()) {
        if (!first)
            os << " + ";
        os << "O(" << var << "^" << hi_ << ")";
    } else if (first) {
        os << "0";
    }
    return os.str();
}

bool operator==(const LaurentEps& a, const LaurentEps& b)
{
    return a.hi_ == b.hi_ && a.c_ == b.c_ && (a.c_.empty() || a.low_ == b.low_);
}

LaurentEps laurent_inv(const LaurentEps& a)
{
    if (a.is_zero())
        throw NotInvertible("zero Laurent series");
    int v = a.valuation();
    if (a.is_exact()) {
        if (a.term_count() != 1)
            throw ContractViolation("exact Laurent polynomial with several terms has no exact inverse; "
                                    "set a precision first");
        return LaurentEps::monomial(-v, Rational(1) / a.leading());
    }
    int rel = a.precision() - v;
    std::vector<Rational> b(rel);
    Rational inv0 = Rational(1) / a.leading();
    b[0] = inv0;
    for (int k = 1; k < rel; ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += a.coeff(v + j) * b[k - j];
        b[k] = -inv0 * acc;
    }
    return LaurentEps(-v, std::move(b), a.precision() - 2 * v);
}

} // namespace toeplab
