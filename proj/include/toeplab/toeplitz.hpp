#pragma once

#include "toeplab/ring.hpp"
#include "toeplab/weight.hpp"

#include <cmath>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

namespace toeplab {

template <class R>
using Matrix = std::vector<std::vector<R>>;

// Division-free determinant (Berkowitz): char-poly coefficients built from
// leading principal blocks.
template <class R>
R berkowitz_det(const Matrix<R>& A)
{
    int n = static_cast<int>(A.size());
    if (n == 0)
        return lift<R>(1);
    std::vector<R> C = {lift<R>(1), -A[0][0]};
    for (int r = 1; r < n; ++r) {
        // t = [1, -a, -R S, -R M S, ..., -R M^{r-1} S]
        std::vector<R> t;
        t.push_back(lift<R>(1));
        t.push_back(-A[r][r]);
        std::vector<R> col(r);
        for (int i = 0; i < r; ++i)
            col[i] = A[i][r];
        for (int p = 0; p < r; ++p) {
            R acc = lift<R>(0);
            for (int j = 0; j < r; ++j)
                acc = acc + A[r][j] * col[j];
            t.push_back(-acc);
            if (p + 1 < r) {
                std::vector<R> next(r, lift<R>(0));
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j)
                        next[i] = next[i] + A[i][j] * col[j];
                col = std::move(next);
            }
        }
        std::vector<R> D(r + 2, lift<R>(0));
        for (int i = 0; i <= r + 1; ++i)
            for (int j = 0; j <= std::min(i, r); ++j)
                D[i] = D[i] + t[i - j] * C[j];
        C = std::move(D);
    }
    if (n % 2)
        return -C[n];
    return C[n];
}

// Determinant by elimination: partial pivoting in floating point; in exact rings
// full pivoting on units, with a division-free fallback once no unit remains.
template <class R>
R det(Matrix<R> M)
{
    int n = static_cast<int>(M.size());
    if (n == 0)
        return lift<R>(1);
    if constexpr (std::is_same_v<R, double>) {
        double d = 1;
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(M[r][c]) > std::abs(M[piv][c]))
                    piv = r;
            if (M[piv][c] == 0)
                return 0;
            if (piv != c) {
                std::swap(M[piv], M[c]);
                d = -d;
            }
            d *= M[c][c];
            for (int r = c + 1; r < n; ++r) {
                double f = M[r][c] / M[c][c];
                for (int k = c; k < n; ++k)
                    M[r][k] -= f * M[c][k];
            }
        }
        return d;
    } else {
        R acc = lift<R>(1);
        bool negate = false;
        for (int c = 0; c < n; ++c) {
            int pr = -1, pc = -1;
            for (int r = c; r < n && pr < 0; ++r)
                for (int k = c; k < n; ++k)
                    if (is_unit(M[r][k])) {
                        pr = r;
                        pc = k;
                        break;
                    }
            if (pr < 0) {
                Matrix<R> rest(n - c, std::vector<R>(n - c));
                for (int r = c; r < n; ++r)
                    for (int k = c; k < n; ++k)
                        rest[r - c][k - c] = M[r][k];
                acc = acc * berkowitz_det(rest);
                break;
            }
            if (pr != c) {
                std::swap(M[pr], M[c]);
                negate = !negate;
            }
            if (pc != c) {
                for (int r = 0; r < n; ++r)
                    std::swap(M[r][pc], M[r][c]);
                negate = !negate;
            }
            acc = acc * M[c][c];
            R pinv = inv(M[c][c]);
            for (int r = c + 1; r < n; ++r) {
                if (is_zero(M[r][c]))
                    continue;
                R f = M[r][c] * pinv;
                for (int k = c; k < n; ++k)
                    M[r][k] = M[r][k] - f * M[c][k];
            }
        }
        if (negate)
            return -acc;
        return acc;
    }
}

// det(mu_{eps+i-j})_{1<=i,j<=n}.
template <class R, class Moments>
R toeplitz_det(const Moments& mu, int n, int eps)
{
    Matrix<R> M(n, std::vector<R>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M[i][j] = mu(eps + i - j);
    return det(std::move(M));
}

template <class R>
struct ToeplitzState {
    int n_max = 0;
    std::vector<R> I;       // I_0..I_{n_max+1}
    std::vector<R> I_plus;  // 0..n_max
    std::vector<R> I_minus; // 0..n_max
    std::vector<R> x, y, v, h;
};

template <class R, class Moments>
ToeplitzState<R> build_state_from_moments(const Moments& mu, int n_max)
{
    ToeplitzState<R> s;
    s.n_max = n_max;
    for (int n = 0; n <= n_max + 1; ++n)
        s.I.push_back(toeplitz_det<R>(mu, n, 0));
    for (int n = 0; n <= n_max; ++n) {
        if (!is_unit(s.I[n]))
            throw SingularTau(n);
        R Ip = toeplitz_det<R>(mu, n, 1);
        R Im = toeplitz_det<R>(mu, n, -1);
        R iv = inv(s.I[n]);
        R sign = lift<R>(n % 2 ? -1 : 1);
        s.I_plus.push_back(Ip);
        s.I_minus.push_back(Im);
        s.x.push_back(sign * Ip * iv);
        s.y.push_back(sign * Im * iv);
        s.v.push_back(lift<R>(1) - s.x.back() * s.y.back());
        s.h.push_back(s.I[n + 1] * iv);
    }
    return s;
}

template <class R>
ToeplitzState<R> build_state(const Weight<R>& w, int n_max)
{
    ExactMoments<R> mu(w);
    return build_state_from_moments<R>(mu, n_max);
}

inline ToeplitzState<double> build_numeric_state(const WeightSpec& w, int n_max, int M = 512)
{
    NumericMoments mu(w, n_max + 2, M);
    return build_state_from_moments<double>(mu, n_max);
}

// I_1^n prod_{i=1}^{n-1} (1 - x_i y_i)^{n-i}.
template <class R>
R reconstruct_In(const ToeplitzState<R>& s, int n)
{
    if (n == 0)
        return lift<R>(1);
    R r = power(s.I[1], n);
    for (int i = 1; i < n; ++i) {
        R v = lift<R>(1) - s.x[i] * s.y[i];
        r = r * power(v, n - i);
    }
    return r;
}

// <f, g> = sum_{i,j} f_i g_j mu_{i-j}, coefficient vectors in ascending powers.
template <class R, class Moments>
R inner_product(const Moments& mu, const std::vector<R>& f, const std::vector<R>& g)
{
    R acc = lift<R>(0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (is_zero(f[i]))
            continue;
        for (size_t j = 0; j < g.size(); ++j)
            if (!is_zero(g[j]))
                acc = acc + f[i] * g[j] * mu(static_cast<int>(i) - static_cast<int>(j));
    }
    return acc;
}

// Monic degree-n biorthogonal polynomial, ascending coefficients. which = 1
// makes <p, z^j> vanish for j < n, which = 2 makes <z^j, p> vanish.
template <class R, class Moments>
std::vector<R> biorthogonal_poly(const Moments& mu, int n, int which)
{
    if (which != 1 && which != 2)
        throw ContractViolation("biorthogonal family must be 1 or 2");
    std::vector<R> p(n + 1, lift<R>(0));
    p[n] = lift<R>(1);
    if (n == 0)
        return p;
    // Row j, column k: coefficient of c_k in the j-th orthogonality condition.
    auto entry = [&](int j, int k) -> R { return which == 1 ? mu(k - j) : mu(j - k); };
    auto rhs = [&](int j) -> R { return -(which == 1 ? mu(n - j) : mu(j - n)); };
    Matrix<R> A(n, std::vector<R>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            A[j][k] = entry(j, k);
    R d = det(A);
    if (!is_unit(d))
        throw SingularTau(n);
    R dinv = inv(d);
    for (int k = 0; k < n; ++k) {
        Matrix<R> Ak = A;
        for (int j = 0; j < n; ++j)
            Ak[j][k] = rhs(j);
        p[k] = det(std::move(Ak)) * dinv;
    }
    return p;
}

} // namespace toeplab
