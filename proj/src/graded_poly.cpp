#include "toeplab/graded_poly.hpp"

#include "toeplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace toeplab {

namespace {

constexpr int max_exponent = 127;

GradedPoly::Key high_bits()
{
    GradedPoly::Key m = 0;
    for (int i = 0; i < VarSet::max_vars; ++i)
        m |= GradedPoly::Key(0x80) << (8 * i);
    return m;
}

const GradedPoly::Key overflow_mask = high_bits();

} // namespace

VarSet::VarSet(std::vector<std::string> names, std::vector<int> weights)
    : names_(std::move(names)), weights_(std::move(weights))
{
    if (names_.size() != weights_.size())
        throw ContractViolation("variable names and weights differ in length");
    if (names_.size() > static_cast<size_t>(max_vars))
        throw ContractViolation("at most 16 graded variables are supported");
    for (int w : weights_)
        if (w < 1)
            throw ContractViolation("variable weights must be positive");
}

int VarSet::index_of(const std::string& name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

GradedPoly::GradedPoly(const Rational& c) : order_(unbounded)
{
    if (c != 0)
        terms_.emplace(Key(0), c);
}

GradedPoly::GradedPoly(VarSetPtr vars, int order) : vars_(std::move(vars)), order_(order)
{
    if (order < 0)
        throw ContractViolation("negative truncation order");
}

GradedPoly GradedPoly::constant(VarSetPtr vars, int order, const Rational& c)
{
    GradedPoly p(std::move(vars), order);
    if (c != 0)
        p.terms_.emplace(Key(0), c);
    return p;
}

GradedPoly GradedPoly::variable(VarSetPtr vars, int order, int idx, const Rational& scale)
{
    GradedPoly p(std::move(vars), order);
    p.check_index(idx);
    if (scale != 0 && p.vars_->weight(idx) <= order)
        p.terms_.emplace(unit(idx), scale);
    return p;
}

GradedPoly GradedPoly::monomial(VarSetPtr vars, int order, const std::vector<int>& exps, const Rational& c)
{
    GradedPoly p(std::move(vars), order);
    if (static_cast<int>(exps.size()) != p.vars_->size())
        throw ContractViolation("exponent vector length does not match the variable set");
    Key k = pack(exps);
    if (c != 0 && p.degree_of(k) <= order)
        p.terms_.emplace(k, c);
    return p;
}

GradedPoly::Key GradedPoly::pack(const std::vector<int>& exps)
{
    Key k = 0;
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0 || exps[i] > max_exponent)
            throw ContractViolation("exponent out of range");
        k |= Key(static_cast<unsigned>(exps[i])) << (8 * i);
    }
    return k;
}

void GradedPoly::check_index(int idx) const
{
    if (!vars_ || idx < 0 || idx >= vars_->size())
        throw ContractViolation("variable index out of range");
}

int GradedPoly::degree_of(Key k) const
{
    if (!vars_)
        return 0;
    int d = 0;
    for (int i = 0; i < vars_->size(); ++i)
        d += exponent(k, i) * vars_->weight(i);
    return d;
}

std::vector<int> GradedPoly::exponents(Key k) const
{
    std::vector<int> e(vars_ ? vars_->size() : 0);
    for (size_t i = 0; i < e.size(); ++i)
        e[i] = exponent(k, static_cast<int>(i));
    return e;
}

Rational GradedPoly::coeff(const std::vector<int>& exps) const
{
    auto it = terms_.find(pack(exps));
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational GradedPoly::constant_term() const
{
    auto it = terms_.find(Key(0));
    return it == terms_.end() ? Rational(0) : it->second;
}

int GradedPoly::valuation() const
{
    int v = unbounded;
    for (const auto& [k, c] : terms_)
        v = std::min(v, degree_of(k));
    return v;
}

int GradedPoly::max_degree() const
{
    int v = -1;
    for (const auto& [k, c] : terms_)
        v = std::max(v, degree_of(k));
    return v;
}

VarSetPtr GradedPoly::merged_vars(const GradedPoly& a, const GradedPoly& b)
{
    if (!a.vars_)
        return b.vars_;
    if (!b.vars_ || a.vars_ == b.vars_)
        return a.vars_;
    if (!(*a.vars_ == *b.vars_))
        throw ContractViolation("graded polynomials over different variable sets");
    return a.vars_;
}

void GradedPoly::drop_above_order()
{
    if (order_ == unbounded)
        return;
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (degree_of(it->first) > order_)
            it = terms_.erase(it);
        else
            ++it;
    }
}

GradedPoly GradedPoly::operator-() const
{
    GradedPoly r = *this;
    for (auto& [k, c] : r.terms_)
        c = -c;
    return r;
}

GradedPoly& GradedPoly::operator+=(const GradedPoly& o)
{
    vars_ = merged_vars(*this, o);
    int ord = std::min(order_, o.order_);
    for (const auto& [k, c] : o.terms_) {
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }
    if (ord < order_ || ord < o.order_) {
        order_ = ord;
        drop_above_order();
    }
    order_ = ord;
    return *this;
}

GradedPoly& GradedPoly::operator-=(const GradedPoly& o)
{
    return *this += -o;
}

GradedPoly& GradedPoly::operator*=(const GradedPoly& o)
{
    VarSetPtr vs = merged_vars(*this, o);
    int ord = std::min(order_, o.order_);
    std::map<Key, Rational> out;
    if (!terms_.empty() && !o.terms_.empty()) {
        GradedPoly probe(vs, 0);
        std::vector<std::pair<int, const std::pair<const Key, Rational>*>> rhs;
        rhs.reserve(o.terms_.size());
        for (const auto& t : o.terms_)
            rhs.emplace_back(probe.degree_of(t.first), &t);
        std::sort(rhs.begin(), rhs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Rational prod;
        for (const auto& [ka, ca] : terms_) {
            int da = probe.degree_of(ka);
            for (const auto& [db, tb] : rhs) {
                if (ord != unbounded && da + db > ord)
                    break;
                Key k = ka + tb->first;
                if (k & overflow_mask)
                    throw ContractViolation("graded exponent overflow");
                mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), tb->second.get_mpq_t());
                auto [it, inserted] = out.emplace(k, prod);
                if (!inserted)
                    it->second += prod;
            }
        }
        for (auto it = out.begin(); it != out.end();) {
            if (it->second == 0)
                it = out.erase(it);
            else
                ++it;
        }
    }
    vars_ = std::move(vs);
    terms_ = std::move(out);
    order_ = ord;
    return *this;
}

GradedPoly& GradedPoly::operator*=(const Rational& q)
{
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_)
        c *= q;
    return *this;
}

GradedPoly GradedPoly::derivative(int idx) const
{
    if (!vars_)
        return GradedPoly();
    check_index(idx);
    int w = vars_->weight(idx);
    GradedPoly r(vars_, order_ == unbounded ? unbounded : std::max(order_ - w, 0));
    for (const auto& [k, c] : terms_) {
        int e = exponent(k, idx);
        if (e == 0)
            continue;
        r.terms_.emplace(k - unit(idx), c * Rational(e));
    }
    r.drop_above_order();
    return r;
}

GradedPoly GradedPoly::integral(int idx) const
{
    check_index(idx);
    int w = vars_->weight(idx);
    GradedPoly r(vars_, order_ == unbounded ? unbounded : order_ + w);
    for (const auto& [k, c] : terms_) {
        int e = exponent(k, idx);
        if (e + 1 > max_exponent)
            throw ContractViolation("graded exponent overflow");
        r.terms_.emplace(k + unit(idx), c / Rational(e + 1));
    }
    return r;
}

GradedPoly GradedPoly::times_variable(int idx) const
{
    check_index(idx);
    int w = vars_->weight(idx);
    GradedPoly r(vars_, order_ == unbounded ? unbounded : order_ + w);
    for (const auto& [k, c] : terms_) {
        if (exponent(k, idx) + 1 > max_exponent)
            throw ContractViolation("graded exponent overflow");
        r.terms_.emplace(k + unit(idx), c);
    }
    return r;
}

GradedPoly GradedPoly::truncated(int order) const
{
    if (order > order_)
        throw ContractViolation("cannot raise truncation order");
    GradedPoly r = *this;
    r.order_ = order;
    r.drop_above_order();
    return r;
}

GradedPoly GradedPoly::homogeneous_part(int degree) const
{
    GradedPoly r(vars_, order_);
    for (const auto& [k, c] : terms_)
        if (degree_of(k) == degree)
            r.terms_.emplace(k, c);
    return r;
}

double GradedPoly::evaluate(const std::vector<double>& values) const
{
    double acc = 0;
    for (const auto& [k, c] : terms_) {
        double m = c.get_d();
        for (int i = 0; vars_ && i < vars_->size(); ++i)
            m *= std::pow(values.at(i), exponent(k, i));
        acc += m;
    }
    return acc;
}

Rational GradedPoly::evaluate(const std::vector<Rational>& values) const
{
    Rational acc = 0;
    for (const auto& [k, c] : terms_) {
        Rational m = c;
        for (int i = 0; vars_ && i < vars_->size(); ++i)
            for (int e = exponent(k, i); e > 0; --e)
                m *= values.at(i);
        acc += m;
    }
    return acc;
}

std::string GradedPoly::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        Rational a = abs(c);
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        std::ostringstream mono;
        bool any = false;
        for (int i = 0; vars_ && i < vars_->size(); ++i) {
            int e = exponent(k, i);
            if (e == 0)
                continue;
            if (any)
                mono << "*";
            mono << vars_->name(i);
            if (e > 1)
                mono << "^" << e;
            any = true;
        }
        if (!any)
            os << format_rational(a);
        else if (a == 1)
            os << mono.str();
        else
            os << format_rational(a) << "*" << mono.str();
        first = false;
    }
    if (first)
        os << "0";
    if (!is_exact())
        os << " + O(deg " << order_ + 1 << ")";
    return os.str();
}

bool operator==(const GradedPoly& a, const GradedPoly& b)
{
    return a.order_ == b.order_ && a.terms_ == b.terms_;
}

GradedPoly graded_inv(const GradedPoly& a)
{
    Rational c0 = a.constant_term();
    if (c0 == 0)
        throw NotInvertible("graded polynomial with zero constant term");
    Rational inv0 = Rational(1) / c0;
    if (a.term_count() == 1)
        return GradedPoly::constant(a.vars(), a.order(), inv0);
    if (a.is_exact())
        throw ContractViolation("inverse of a non-constant exact graded polynomial needs a truncation order");
    // a = c0 (1 - r) with r of positive valuation; 1/a = inv0 * sum r^k.
    GradedPoly r = GradedPoly::constant(a.vars(), a.order(), 1) - a * inv0;
    GradedPoly acc = GradedPoly::constant(a.vars(), a.order(), 1);
    GradedPoly pw = acc;
    int v = r.valuation();
    for (int k = 1; k * v <= a.order(); ++k) {
        pw *= r;
        if (pw.is_zero())
            break;
        acc += pw;
    }
    return acc * inv0;
}

} // namespace toeplab
