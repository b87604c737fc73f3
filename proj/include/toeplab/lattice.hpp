#pragma once

#include "toeplab/errors.hpp"
#include "toeplab/ring.hpp"
#include "toeplab/toeplitz.hpp"
#include "toeplab/weight.hpp"

#include <string>
#include <vector>

namespace toeplab {

// Windowed access to the band matrices, 1-based:
//   L1[i][j] = -x_i y_{j-1} (j <= i),  L1[i][i+1] = v_i,
//   L2[i][j] = -x_{i-1} y_j (i <= j),  L2[j+1][j] = v_j.
// Owns copies of x, y, v for indices 0..max_index(); x_0 = y_0 = 1 by convention.
template <class R>
class LatticeView {
public:
    LatticeView() = default;

    LatticeView(std::vector<R> x, std::vector<R> y) : x_(std::move(x)), y_(std::move(y))
    {
        if (x_.size() != y_.size())
            throw ContractViolation("x and y windows differ in length");
        for (size_t k = 0; k < x_.size(); ++k)
            v_.push_back(lift<R>(1) - x_[k] * y_[k]);
    }

    explicit LatticeView(const ToeplitzState<R>& s) : x_(s.x), y_(s.y), v_(s.v) {}

    int max_index() const { return static_cast<int>(x_.size()) - 1; }

    const R& x(int k) const { return at(x_, k); }
    const R& y(int k) const { return at(y_, k); }
    const R& v(int k) const { return at(v_, k); }

    // Replaces (x_k, y_k), appending when k = max_index() + 1.
    void assign(int k, const R& xk, const R& yk)
    {
        if (k < 0 || k > max_index() + 1)
            throw ContractViolation("lattice assignment leaves a gap");
        if (k == max_index() + 1) {
            x_.push_back(xk);
            y_.push_back(yk);
            v_.push_back(lift<R>(1) - xk * yk);
            return;
        }
        x_[k] = xk;
        y_[k] = yk;
        v_[k] = lift<R>(1) - xk * yk;
    }

    // The x <-> y image, which maps L1 to the transpose of L2.
    LatticeView swapped() const
    {
        LatticeView r;
        r.x_ = y_;
        r.y_ = x_;
        r.v_ = v_;
        return r;
    }

    R entry(int which, int i, int j) const
    {
        check_indices(which, i, j);
        if (which == 1) {
            if (j <= i)
                return -(x(i) * y(j - 1));
            if (j == i + 1)
                return v(i);
            return lift<R>(0);
        }
        if (i <= j)
            return -(x(i - 1) * y(j));
        if (i == j + 1)
            return v(j);
        return lift<R>(0);
    }

    // sum_p coeffs[p] (L^p)_{ij}.
    R poly_entry(int which, const std::vector<R>& coeffs, int i, int j) const
    {
        check_indices(which, i, j);
        if (which == 2)
            return band_poly(y_, x_, coeffs, j, i);
        return band_poly(x_, y_, coeffs, i, j);
    }

    R power_entry(int which, int p, int i, int j) const
    {
        if (p < 0)
            throw ContractViolation("negative matrix power");
        check_indices(which, i, j);
        if ((which == 1 && j > i + p) || (which == 2 && i > j + p))
            return lift<R>(0);
        std::vector<R> c(p + 1, lift<R>(0));
        c[p] = lift<R>(1);
        return poly_entry(which, c, i, j);
    }

private:
    const R& at(const std::vector<R>& a, int k) const
    {
        if (k < 0 || k > max_index())
            throw InsufficientState("lattice index " + std::to_string(k) + " outside 0.." +
                                    std::to_string(max_index()));
        return a[k];
    }

    static void check_indices(int which, int i, int j)
    {
        if (which != 1 && which != 2)
            throw ContractViolation("lattice matrix must be 1 or 2");
        if (i < 1 || j < 1)
            throw ContractViolation("lattice indices are 1-based");
    }

    // Row i of sum_p c_p M^p for M[k][l] = -a_k b_{l-1} (l <= k), M[k][k+1] = v_k, read at column j.
    // Each step is a suffix-sum pass over the current support 1..m.
    R band_poly(const std::vector<R>& a, const std::vector<R>& b, const std::vector<R>& c, int i, int j) const
    {
        R result = lift<R>(0);
        size_t degree = c.size();
        while (degree > 0 && is_exact_zero(c[degree - 1]))
            --degree;
        std::vector<R> row(i + 1, lift<R>(0));
        row[i] = lift<R>(1);
        int m = i;
        for (size_t p = 0; p < degree; ++p) {
            if (p > 0) {
                if (m > max_index())
                    throw InsufficientState("band power needs lattice index " + std::to_string(m) +
                                            ", have 0.." + std::to_string(max_index()));
                std::vector<R> next(m + 2, lift<R>(0));
                R suffix = lift<R>(0);
                for (int l = m; l >= 1; --l) {
                    if (!is_exact_zero(row[l]))
                        suffix = suffix + row[l] * a[l];
                    R e = lift<R>(0);
                    if (!is_exact_zero(suffix))
                        e = -(b[l - 1] * suffix);
                    if (l >= 2 && !is_exact_zero(row[l - 1]))
                        e = e + row[l - 1] * v_[l - 1];
                    next[l] = e;
                }
                if (!is_exact_zero(row[m]))
                    next[m + 1] = row[m] * v_[m];
                row = std::move(next);
                ++m;
            }
            if (j <= m && !is_exact_zero(c[p]) && !is_exact_zero(row[j]))
                result = result + c[p] * row[j];
        }
        return result;
    }

    std::vector<R> x_, y_, v_;
};

// The weight-dependent matrix polynomial
//   which = 1: (a + b L1 + c L1^2) P1'(L1) + c (n + gp1 + gp2 + gamma) L1,
//   which = 2: (c + b L2 + a L2^2) P2'(L2) + a (n + gpp1 + gpp2 - gamma) L2,
// stored by its coefficients in powers of L.
template <class R>
struct ScriptL {
    int which = 1;
    int n = 0;
    std::vector<R> coeffs;
};

template <class R>
ScriptL<R> script_matrix(const Weight<R>& w, const Abc& abc, int which, int n)
{
    if (which != 1 && which != 2)
        throw ContractViolation("script matrix must be 1 or 2");
    const std::vector<R>& u = which == 1 ? w.u_plus : w.u_minus;
    Rational q0 = which == 1 ? abc.a : abc.c;
    Rational q2 = which == 1 ? abc.c : abc.a;
    Rational base[3] = {q0, abc.b, q2};
    ScriptL<R> s;
    s.which = which;
    s.n = n;
    s.coeffs.assign(std::max<size_t>(u.size() + 2, 2), lift<R>(0));
    // P'(L) = sum_i u_i L^{i-1}
    for (size_t i = 0; i < u.size(); ++i)
        for (int k = 0; k < 3; ++k)
            if (base[k] != 0)
                s.coeffs[i + k] = s.coeffs[i + k] + lift<R>(base[k]) * u[i];
    Rational shift;
    if (which == 1)
        shift = q2 * (n + w.gp1 + w.gp2 + w.gamma);
    else
        shift = q2 * (n + w.gpp1 + w.gpp2 - w.gamma);
    s.coeffs[1] = s.coeffs[1] + lift<R>(shift);
    return s;
}

template <class R>
R script_entry(const LatticeView<R>& view, const ScriptL<R>& s, int i, int j)
{
    return view.poly_entry(s.which, s.coeffs, i, j);
}

// f(n + 1) - f(n), with f already evaluated at its own indices.
template <class F>
auto discrete_deriv(F&& f, int n) -> decltype(f(n))
{
    decltype(f(n)) hi = f(n + 1);
    decltype(f(n)) lo = f(n);
    return hi - lo;
}

// A monomial sign * x_i y_j * prod v_k in the band-matrix entries.
struct BandMonomial {
    int sign = -1;
    int x_index = 0;
    int y_index = 0;
    std::vector<int> v_indices; // ascending

    std::string to_string() const;
    friend bool operator==(const BandMonomial&, const BandMonomial&) = default;
};

enum class EntryPosition { diagonal, subdiagonal };

struct LeadingTerms {
    BandMonomial top;    // carries the highest-index variable
    BandMonomial bottom; // carries the lowest-index variable
};

// Extreme monomials of (L^p)_{nn} (diagonal), v_n (L1^p)_{n+1,n} or (L2^p)_{n+1,n}
// (subdiagonal). The subdiagonal L2 entry needs p >= 2, since (L2)_{n+1,n} = v_n.
LeadingTerms leading_terms(int which, int p, EntryPosition pos, int n);

} // namespace toeplab
