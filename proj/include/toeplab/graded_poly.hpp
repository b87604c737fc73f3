#pragma once

#include "toeplab/rational.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace toeplab {

// Named variables with positive integer weights; at most 16 of them.
class VarSet {
public:
    static constexpr int max_vars = 16;

    VarSet(std::vector<std::string> names, std::vector<int> weights);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(i); }
    int weight(int i) const { return weights_.at(i); }
    // -1 when absent.
    int index_of(const std::string& name) const;

    friend bool operator==(const VarSet& a, const VarSet& b)
    {
        return a.names_ == b.names_ && a.weights_ == b.weights_;
    }

private:
    std::vector<std::string> names_;
    std::vector<int> weights_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

// Weighted-degree-truncated multivariate polynomial over the rationals.
//
// Terms of weighted degree above order() are dropped. A null variable set
// marks a constant that combines with any variable set. Binary operations
// keep the smaller of the two orders.
class GradedPoly {
public:
    // Exponent multi-index packed as 8 bits per variable.
    using Key = unsigned __int128;

    GradedPoly() : order_(unbounded) {}
    GradedPoly(const Rational& c);
    GradedPoly(long c) : GradedPoly(Rational(c)) {}
    GradedPoly(int c) : GradedPoly(Rational(c)) {}
    GradedPoly(VarSetPtr vars, int order);

    static GradedPoly constant(VarSetPtr vars, int order, const Rational& c);
    static GradedPoly variable(VarSetPtr vars, int order, int idx, const Rational& scale = 1);
    static GradedPoly monomial(VarSetPtr vars, int order, const std::vector<int>& exps, const Rational& c);

    const VarSetPtr& vars() const { return vars_; }
    int order() const { return order_; }
    bool is_exact() const { return order_ == unbounded; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Key, Rational>& terms() const { return terms_; }

    Rational coeff(const std::vector<int>& exps) const;
    Rational constant_term() const;
    // Smallest weighted degree among the terms; unbounded for zero.
    int valuation() const;
    int max_degree() const;
    int degree_of(Key k) const;
    std::vector<int> exponents(Key k) const;

    GradedPoly operator-() const;
    GradedPoly& operator+=(const GradedPoly& o);
    GradedPoly& operator-=(const GradedPoly& o);
    GradedPoly& operator*=(const GradedPoly& o);
    GradedPoly& operator*=(const Rational& q);

    // Partial derivative; the order drops by the variable's weight.
    GradedPoly derivative(int idx) const;
    // Antiderivative vanishing where the variable is 0; the order rises by its weight.
    GradedPoly integral(int idx) const;
    // Multiplication by a variable; the order rises by its weight.
    GradedPoly times_variable(int idx) const;
    GradedPoly truncated(int order) const;
    GradedPoly homogeneous_part(int degree) const;

    double evaluate(const std::vector<double>& values) const;
    Rational evaluate(const std::vector<Rational>& values) const;
    std::string to_string() const;

    friend bool operator==(const GradedPoly& a, const GradedPoly& b);

private:
    static Key pack(const std::vector<int>& exps);
    static int exponent(Key k, int i) { return static_cast<int>((k >> (8 * i)) & 0xff); }
    static Key unit(int i) { return Key(1) << (8 * i); }
    static VarSetPtr merged_vars(const GradedPoly& a, const GradedPoly& b);
    void check_index(int idx) const;
    void drop_above_order();

    VarSetPtr vars_;
    std::map<Key, Rational> terms_;
    int order_;
};

inline GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
inline GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }
inline GradedPoly operator*(GradedPoly a, const GradedPoly& b) { return a *= b; }
inline GradedPoly operator*(GradedPoly a, const Rational& q) { return a *= q; }
inline GradedPoly operator*(const Rational& q, GradedPoly a) { return a *= q; }

// Inverse through the geometric series; needs a nonzero constant term and a finite order
// unless the input is a constant.
GradedPoly graded_inv(const GradedPoly& a);

} // namespace toeplab
