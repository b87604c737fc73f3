#pragma once

#include "toeplab/lattice.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace toeplab {

namespace detail {

template <class R>
struct ScriptPair {
    ScriptL<R> first, second;
};

template <class R>
ScriptPair<R> scripts(const Weight<R>& w, const Abc& abc, int n)
{
    return {script_matrix(w, abc, 1, n), script_matrix(w, abc, 2, n)};
}

// v_n (L1script)_{n+1,n} - (L2script)_{n+1,n}; zero at n = 0.
template <class R>
R lower_bracket(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int n)
{
    if (n == 0)
        return lift<R>(0);
    auto s = scripts(w, abc, n);
    return lv.v(n) * script_entry(lv, s.first, n + 1, n) - script_entry(lv, s.second, n + 1, n);
}

// (L1script)_{n,n+1} - v_n (L2script)_{n,n+1}; zero at n = 0.
template <class R>
R upper_bracket(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int n)
{
    if (n == 0)
        return lift<R>(0);
    auto s = scripts(w, abc, n);
    return script_entry(lv, s.first, n, n + 1) - lv.v(n) * script_entry(lv, s.second, n, n + 1);
}

template <class R>
std::vector<R> quadratic(const Rational& c2, const Rational& c1)
{
    return {lift<R>(0), lift<R>(c1), lift<R>(c2)};
}

inline void require_index(int n, int lowest, const char* what)
{
    if (n < lowest)
        throw ContractViolation(std::string(what) + " needs n >= " + std::to_string(lowest));
}

} // namespace detail

// (L1script^{(n+1)} - L2script^{(n+1)})_{n+1,n+1} - (L1script^{(n)} - L2script^{(n)})_{nn} + (c L1 - a L2)_{nn}.
template <class R>
R residual_case12_first(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int n)
{
    detail::require_index(n, 1, "first relation");
    auto diag = [&](int k) -> R {
        auto s = detail::scripts(w, abc, k);
        return script_entry(lv, s.first, k, k) - script_entry(lv, s.second, k, k);
    };
    R r = discrete_deriv(diag, n);
    if (abc.c != 0)
        r = r + lift<R>(abc.c) * lv.entry(1, n, n);
    if (abc.a != 0)
        r = r - lift<R>(abc.a) * lv.entry(2, n, n);
    return r;
}

// The quantity the second relation declares constant, read at index m >= 1:
//   (v_m L1script^{(m)} - L2script^{(m)})_{m+1,m} - (same at m - 1)_{m,m-1} + (c L1^2 + b L1)_{mm},
// with the bracket at 0 taken as zero. Its value at m = 1 is C.
template <class R>
R case12_constant(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int m = 1)
{
    detail::require_index(m, 1, "relation constant");
    R r = detail::lower_bracket(lv, w, abc, m) - detail::lower_bracket(lv, w, abc, m - 1);
    return r + lv.poly_entry(1, detail::quadratic<R>(abc.c, abc.b), m, m);
}

// Second relation at n >= 0; identically zero at n = 0 by the definition of C.
template <class R>
R residual_case12_second(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int n)
{
    detail::require_index(n, 0, "second relation");
    return case12_constant(lv, w, abc, n + 1) - case12_constant(lv, w, abc, 1);
}

// Dual constant read at m >= 1:
//   (L1script^{(m)} - v_m L2script^{(m)})_{m,m+1} - (same at m - 1) - (a L2^2 + b L2)_{mm}.
template <class R>
R case12_dual_constant(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int m = 1)
{
    detail::require_index(m, 1, "dual relation constant");
    R r = detail::upper_bracket(lv, w, abc, m) - detail::upper_bracket(lv, w, abc, m - 1);
    return r - lv.poly_entry(2, detail::quadratic<R>(abc.a, abc.b), m, m);
}

template <class R>
R residual_case12_dual_second(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, int n)
{
    detail::require_index(n, 0, "dual second relation");
    return case12_dual_constant(lv, w, abc, n + 1) - case12_dual_constant(lv, w, abc, 1);
}

template <class R>
struct GammaPair {
    R gamma, gamma_tilde;
};

namespace detail {

// sum_i u_i L^{i-1} and sum_i u_i L^i as coefficient vectors.
template <class R>
std::vector<R> derivative_poly(const std::vector<R>& u)
{
    return u.empty() ? std::vector<R>{lift<R>(0)} : u;
}

template <class R>
std::vector<R> shifted_poly(const std::vector<R>& u)
{
    std::vector<R> c{lift<R>(0)};
    c.insert(c.end(), u.begin(), u.end());
    return c;
}

} // namespace detail

// Rational forms of the Case 3 pair:
//   Gamma_n  = n x_n + (v_n / y_n)(-(L1 P1')_{n+1,n+1} - (L2 P2')_{nn} + (P1')_{n+1,n} + (P2')_{n,n+1}),
//   Gamma~_n = n y_n + (v_n / x_n)(-(L1 P1')_{nn} - (L2 P2')_{n+1,n+1} + (P1')_{n+1,n} + (P2')_{n,n+1}).
template <class R>
GammaPair<R> residual_case3_rational(const LatticeView<R>& lv, const Weight<R>& w, int n)
{
    detail::require_index(n, 1, "Case 3 relation");
    if (!is_unit(lv.y(n)))
        throw SingularVariable("y_" + std::to_string(n) + " is not invertible");
    if (!is_unit(lv.x(n)))
        throw SingularVariable("x_" + std::to_string(n) + " is not invertible");
    auto lp1 = detail::shifted_poly(w.u_plus);
    auto lp2 = detail::shifted_poly(w.u_minus);
    auto p1 = detail::derivative_poly(w.u_plus);
    auto p2 = detail::derivative_poly(w.u_minus);
    R common = lv.poly_entry(1, p1, n + 1, n) + lv.poly_entry(2, p2, n, n + 1);
    R b1 = common - lv.poly_entry(1, lp1, n + 1, n + 1) - lv.poly_entry(2, lp2, n, n);
    R b2 = common - lv.poly_entry(1, lp1, n, n) - lv.poly_entry(2, lp2, n + 1, n + 1);
    GammaPair<R> g;
    g.gamma = lift<R>(n) * lv.x(n) + lv.v(n) * b1 * inv(lv.y(n));
    g.gamma_tilde = lift<R>(n) * lv.y(n) + lv.v(n) * b2 * inv(lv.x(n));
    return g;
}

// Division-free forms of the Case 3 pair:
//   Gamma_n  = n x_n + v_n [ sum_i u_i sum_{k=n}^{n+i} x_k (L1^{i-1})_{n+1,k}
//                          + sum_i u_{-i} sum_{k=n-i+1}^{n+1} x_{k-1} (L2^{i-1})_{n,k} ],
//   Gamma~_n = n y_n + v_n [ sum_i u_i sum_{k=n-i+1}^{n+1} y_{k-1} (L1^{i-1})_{k,n}
//                          + sum_i u_{-i} sum_{k=n}^{n+i} y_k (L2^{i-1})_{k,n+1} ].
template <class R>
R residual_gamma(const LatticeView<R>& lv, const Weight<R>& w, int n)
{
    detail::require_index(n, 1, "Case 3 relation");
    R g = lift<R>(0);
    for (int i = 1; i <= w.N1(); ++i) {
        if (is_zero(w.u_plus[i - 1]))
            continue;
        R a = lift<R>(0);
        for (int k = n; k <= n + i; ++k)
            a = a + lv.x(k) * lv.power_entry(1, i - 1, n + 1, k);
        g = g + w.u_plus[i - 1] * a;
    }
    for (int i = 1; i <= w.N2(); ++i) {
        if (is_zero(w.u_minus[i - 1]))
            continue;
        R a = lift<R>(0);
        for (int k = std::max(1, n - i + 1); k <= n + 1; ++k)
            a = a + lv.x(k - 1) * lv.power_entry(2, i - 1, n, k);
        g = g + w.u_minus[i - 1] * a;
    }
    return lift<R>(n) * lv.x(n) + lv.v(n) * g;
}

template <class R>
R residual_gamma_tilde(const LatticeView<R>& lv, const Weight<R>& w, int n)
{
    detail::require_index(n, 1, "Case 3 relation");
    R g = lift<R>(0);
    for (int i = 1; i <= w.N1(); ++i) {
        if (is_zero(w.u_plus[i - 1]))
            continue;
        R b = lift<R>(0);
        for (int k = std::max(1, n - i + 1); k <= n + 1; ++k)
            b = b + lv.y(k - 1) * lv.power_entry(1, i - 1, k, n);
        g = g + w.u_plus[i - 1] * b;
    }
    for (int i = 1; i <= w.N2(); ++i) {
        if (is_zero(w.u_minus[i - 1]))
            continue;
        R b = lift<R>(0);
        for (int k = n; k <= n + i; ++k)
            b = b + lv.y(k) * lv.power_entry(2, i - 1, k, n + 1);
        g = g + w.u_minus[i - 1] * b;
    }
    return lift<R>(n) * lv.y(n) + lv.v(n) * g;
}

template <class R>
GammaPair<R> residual_case3(const LatticeView<R>& lv, const Weight<R>& w, int n)
{
    return {residual_gamma(lv, w, n), residual_gamma_tilde(lv, w, n)};
}

// Self-dual relation, rational form:
//   k x_k - (v_k / x_k)[(sum u_i L1^i)_{k+1,k+1} + (sum u_i L1^i)_{kk} - 2 (sum u_i L1^{i-1})_{k+1,k}].
template <class R>
R residual_selfdual_rational(const LatticeView<R>& lv, const std::vector<R>& u, int k)
{
    detail::require_index(k, 1, "self-dual relation");
    if (!is_unit(lv.x(k)))
        throw SingularVariable("x_" + std::to_string(k) + " is not invertible");
    auto lp = detail::shifted_poly(u);
    auto p = detail::derivative_poly(u);
    R b = lv.poly_entry(1, lp, k + 1, k + 1) + lv.poly_entry(1, lp, k, k) -
          lift<R>(2) * lv.poly_entry(1, p, k + 1, k);
    return lift<R>(k) * lv.x(k) - lv.v(k) * b * inv(lv.x(k));
}

// Self-dual relation, division-free form:
//   k x_k + v_k sum_i u_i [ sum_{j=k-1}^{k+i-1} x_{j+1} (L1^{i-1})_{k+1,j+1}
//                         + sum_{j=k-i+1}^{k+1} x_{j-1} (L1^{i-1})_{jk} ].
template <class R>
R residual_selfdual(const LatticeView<R>& lv, const std::vector<R>& u, int k)
{
    detail::require_index(k, 1, "self-dual relation");
    R acc = lift<R>(0);
    for (int i = 1; i <= static_cast<int>(u.size()); ++i) {
        if (is_zero(u[i - 1]))
            continue;
        R s = lift<R>(0);
        for (int j = k - 1; j <= k + i - 1; ++j)
            s = s + lv.x(j + 1) * lv.power_entry(1, i - 1, k + 1, j + 1);
        for (int j = std::max(1, k - i + 1); j <= k + 1; ++j)
            s = s + lv.x(j - 1) * lv.power_entry(1, i - 1, j, k);
        acc = acc + u[i - 1] * s;
    }
    return lift<R>(k) * lv.x(k) + lv.v(k) * acc;
}

// Invariant of the 3-step self-dual map, (1 - y^2)(1 - z^2) + a y z with a = -n/t.
template <class R>
R invariant_phi_3step(int n, const R& t, const R& y, const R& z)
{
    R one = lift<R>(1);
    R q = exact_divide(lift<R>(n) * y * z, t);
    R p = (one - y * y) * (one - z * z);
    int o = std::min(truncation_order(p), truncation_order(q));
    return truncated_to(p, o) - truncated_to(q, o);
}

// Invariant of the 5-step self-dual map,
//   n y z - (1 - y^2)(1 - z^2)(t + 2 s (x (u - y) - z (u + y))).
template <class R>
R invariant_phi_5step(int n, const R& t, const R& s, const R& x, const R& y, const R& z, const R& u)
{
    R one = lift<R>(1);
    return lift<R>(n) * y * z -
           (one - y * y) * (one - z * z) * (t + lift<R>(2) * s * (x * (u - y) - z * (u + y)));
}

// Phi(x_{n+1}, x_n) - Phi(x_n, x_{n-1}) along an orbit, a = -n/t on both sides.
template <class R>
R invariant_shift_3step(int n, const R& t, const std::vector<R>& x)
{
    return invariant_phi_3step(n, t, x.at(n + 1), x.at(n)) - invariant_phi_3step(n, t, x.at(n), x.at(n - 1));
}

// Phi(x_{m-2}, .., x_{m+1}) - Phi(x_{m-1}, .., x_{m+2}), with the multiplier m the window's centre.
template <class R>
R invariant_shift_5step(int m, const R& t, const R& s, const std::vector<R>& x)
{
    return invariant_phi_5step(m, t, s, x.at(m - 2), x.at(m - 1), x.at(m), x.at(m + 1)) -
           invariant_phi_5step(m, t, s, x.at(m - 1), x.at(m), x.at(m + 1), x.at(m + 2));
}

enum class RelationKind { first, second, dual_second, gamma, gamma_tilde, self_dual };

std::string relation_name(RelationKind k);

struct RelationUse {
    RelationKind kind;
    int n;
};

// The relations that determine (x_m, y_m), by case and degree gap. Empty when
// the case table has no entry for this weight.
std::vector<RelationUse> relations_for_target(CaseId id, int n1, int n2, int m);

template <class R>
R evaluate_relation(const LatticeView<R>& lv, const Weight<R>& w, const Abc& abc, RelationUse use)
{
    switch (use.kind) {
    case RelationKind::first:
        return residual_case12_first(lv, w, abc, use.n);
    case RelationKind::second:
        return residual_case12_second(lv, w, abc, use.n);
    case RelationKind::dual_second:
        return residual_case12_dual_second(lv, w, abc, use.n);
    case RelationKind::gamma:
        return residual_gamma(lv, w, use.n);
    case RelationKind::gamma_tilde:
        return residual_gamma_tilde(lv, w, use.n);
    case RelationKind::self_dual:
        return residual_selfdual(lv, w.u_plus, use.n);
    }
    throw ContractViolation("unknown relation kind");
}

// Smallest target index whose relations all sit at n >= 1; seeds are indices 0..m-1.
int first_solvable_index(CaseId id, int n1, int n2);

namespace detail {

template <class R>
int view_order(const LatticeView<R>& lv)
{
    int o = unbounded;
    for (int k = 0; k <= lv.max_index(); ++k)
        o = std::min({o, truncation_order(lv.x(k)), truncation_order(lv.y(k))});
    return o;
}

template <class R>
void lower_order(LatticeView<R>& lv, Weight<R>& w, int order)
{
    if (order == unbounded)
        return;
    for (int k = 0; k <= lv.max_index(); ++k)
        lv.assign(k, truncated_to(lv.x(k), order), truncated_to(lv.y(k), order));
    for (auto& u : w.u_plus)
        u = truncated_to(u, order);
    for (auto& u : w.u_minus)
        u = truncated_to(u, order);
}

template <class R>
std::pair<R, R> solve_step(LatticeView<R>& lv, Weight<R>& w, const CaseTag& tag, int m)
{
    std::vector<RelationUse> uses = relations_for_target(tag.id, w.N1(), w.N2(), m);
    if (uses.empty())
        throw UnsolvableStep("no relation pairing for N1 = " + std::to_string(w.N1()) +
                             ", N2 = " + std::to_string(w.N2()));
    bool self_dual = tag.id == CaseId::self_dual;
    auto eval = [&](const R& X, const R& Y, size_t which) -> R {
        lv.assign(m, X, self_dual ? X : Y);
        return evaluate_relation(lv, w, tag.abc, uses[which]);
    };
    R zero = lift<R>(0), one = lift<R>(1);
    if (self_dual) {
        R r0 = eval(zero, zero, 0);
        R A = eval(one, one, 0) - r0;
        if (is_zero(A))
            throw UnsolvableStep("step " + std::to_string(m) + ": leading coefficient vanishes");
        R X;
        try {
            X = exact_divide(-r0, A);
        } catch (const NotInvertible&) {
            throw UnsolvableStep("step " + std::to_string(m) + ": leading coefficient " + to_string(A) +
                                 " does not divide");
        }
        int o = std::min(view_order(lv), truncation_order(X));
        lower_order(lv, w, o);
        X = truncated_to(X, o);
        if (!is_negligible(eval(X, X, 0)))
            throw UnsolvableStep("step " + std::to_string(m) + ": relation is not affine in x_" + std::to_string(m));
        return {X, X};
    }
    R r1 = eval(zero, zero, 0), r2 = eval(zero, zero, 1);
    R A1 = eval(one, zero, 0) - r1, A2 = eval(one, zero, 1) - r2;
    R B1 = eval(zero, one, 0) - r1, B2 = eval(zero, one, 1) - r2;
    R det = A1 * B2 - B1 * A2;
    if (is_zero(det))
        throw UnsolvableStep("step " + std::to_string(m) + ": leading determinant vanishes");
    R X, Y;
    try {
        X = exact_divide(B1 * r2 - B2 * r1, det);
        Y = exact_divide(A2 * r1 - A1 * r2, det);
    } catch (const NotInvertible&) {
        throw UnsolvableStep("step " + std::to_string(m) + ": leading determinant " + to_string(det) +
                             " does not divide");
    }
    int o = std::min({view_order(lv), truncation_order(X), truncation_order(Y)});
    lower_order(lv, w, o);
    X = truncated_to(X, o);
    Y = truncated_to(Y, o);
    if (!is_negligible(eval(X, Y, 0)) || !is_negligible(eval(X, Y, 1)))
        throw UnsolvableStep("step " + std::to_string(m) + ": relations are not affine in the unknowns");
    return {X, Y};
}

} // namespace detail

// Extends the seeds (indices 0..seeds.max_index()) to index n_max by the case
// table, solving each step from the affine dependence of its two relations on
// the unknowns (x_m, y_m). Series results drop order where a step divides by t.
template <class R>
LatticeView<R> solve_forward(LatticeView<R> lv, const Weight<R>& w, const CaseTag& tag, int n_max)
{
    int first = first_solvable_index(tag.id, w.N1(), w.N2());
    if (lv.max_index() + 1 < first)
        throw ContractViolation("solver needs seeds x_0..x_" + std::to_string(first - 1));
    Weight<R> lw = w;
    int o = detail::view_order(lv);
    for (const auto& u : w.u_plus)
        o = std::min(o, truncation_order(u));
    for (const auto& u : w.u_minus)
        o = std::min(o, truncation_order(u));
    detail::lower_order(lv, lw, o);
    for (int m = lv.max_index() + 1; m <= n_max; ++m) {
        auto xy = detail::solve_step(lv, lw, tag, m);
        lv.assign(m, xy.first, xy.second);
    }
    return lv;
}

template <class R>
LatticeView<R> seed_view(const ToeplitzState<R>& s, int count)
{
    if (count > s.n_max + 1)
        throw InsufficientState("seed window longer than the state");
    return LatticeView<R>(std::vector<R>(s.x.begin(), s.x.begin() + count),
                          std::vector<R>(s.y.begin(), s.y.begin() + count));
}

template <class R>
struct ConsistencyDelta {
    int n;
    R dx, dy;
};

// Differences between solved values and determinant values, each truncated to the
// common order. Throws ConsistencyFailure when any difference is nonzero.
template <class R>
std::vector<ConsistencyDelta<R>> check_consistency(const LatticeView<R>& solved, const ToeplitzState<R>& s,
                                                   bool throw_on_mismatch = true)
{
    std::vector<ConsistencyDelta<R>> out;
    int top = std::min(solved.max_index(), s.n_max);
    for (int n = 0; n <= top; ++n) {
        int o = std::min({truncation_order(solved.x(n)), truncation_order(solved.y(n)),
                          truncation_order(s.x[n]), truncation_order(s.y[n])});
        R dx = truncated_to(solved.x(n), o) - truncated_to(s.x[n], o);
        R dy = truncated_to(solved.y(n), o) - truncated_to(s.y[n], o);
        if (throw_on_mismatch && (!is_zero(dx) || !is_zero(dy)))
            throw ConsistencyFailure("solved value differs from the determinant at n = " + std::to_string(n));
        out.push_back({n, dx, dy});
    }
    return out;
}

template <class R>
struct ResidualEntry {
    std::string name;
    int n;
    R value;
};

template <class R>
struct RecursionReport {
    CaseTag tag;
    std::vector<ResidualEntry<R>> residuals;
    std::optional<R> constant;      // C
    std::optional<R> dual_constant; // C'
    int order = unbounded;
    bool verified = false;
};

// Every applicable relation at n = 1..n_hi, where n_hi is the largest index the
// state supports for that relation.
template <class R>
RecursionReport<R> verify_relations(const LatticeView<R>& lv, const Weight<R>& w, const CaseTag& tag)
{
    RecursionReport<R> rep;
    rep.tag = tag;
    rep.order = detail::view_order(lv);
    auto sweep = [&](const std::string& name, const std::function<R(int)>& f) {
        for (int n = 1;; ++n) {
            try {
                rep.residuals.push_back({name, n, f(n)});
            } catch (const InsufficientState&) {
                break;
            }
        }
    };
    if (tag.id == CaseId::case1 || tag.id == CaseId::case2) {
        rep.constant = case12_constant(lv, w, tag.abc, 1);
        rep.dual_constant = case12_dual_constant(lv, w, tag.abc, 1);
        sweep("first", [&](int n) { return residual_case12_first(lv, w, tag.abc, n); });
        sweep("second", [&](int n) { return residual_case12_second(lv, w, tag.abc, n); });
        sweep("dual_second", [&](int n) { return residual_case12_dual_second(lv, w, tag.abc, n); });
    } else {
        sweep("gamma", [&](int n) { return residual_gamma(lv, w, n); });
        sweep("gamma_tilde", [&](int n) { return residual_gamma_tilde(lv, w, n); });
        if (tag.id == CaseId::self_dual)
            sweep("self_dual", [&](int n) { return residual_selfdual(lv, w.u_plus, n); });
    }
    rep.verified = true;
    for (const auto& e : rep.residuals)
        rep.verified = rep.verified && is_zero(e.value);
    return rep;
}

struct ConfinementReport {
    int n = 0;
    int sign = 1;
    int precision = 0;
    std::vector<int> indices;    // n-1 .. n+probe
    std::vector<int> valuations; // lowest eps exponent of each x_k
    std::vector<LaurentEps> values;
    Rational blowup_leading;  // coefficient of eps^{-1} in x_n
    Rational after_constant;  // constant term of x_{n+1}
};

// Runs the self-dual recursion over Laurent series in eps from the window
// x_{n-2N}..x_{n-2} and x_{n-1} = sign + eps, through x_{n+probe}. Raises
// ConfinementFailure unless x_n has exponent -1, x_{n+1} = -sign + O(eps) and
// later values stay finite.
ConfinementReport confinement_probe(const Weight<Rational>& w, int n, int sign, const std::vector<Rational>& window,
                                    int precision = 12, int probe = 4);

} // namespace toeplab
