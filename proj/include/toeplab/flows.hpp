#pragma once

#include "toeplab/recursion.hpp"

#include <functional>
#include <string>
#include <vector>

namespace toeplab {

// t_selfdual is d/dt1 - d/ds1 restricted to x = y.
enum class Flow { t1, s1, t2, s2, t_selfdual };

std::string flow_name(Flow f);
Flow parse_flow(const std::string& name);

template <class R>
struct FlowState {
    std::vector<R> x, y; // indices 0..n_max, x_0 = y_0 = 1
    Weight<R> weight;    // exponents drift with the flow
    double time = 0;

    int n_max() const { return static_cast<int>(x.size()) - 1; }
    LatticeView<R> view() const { return LatticeView<R>(x, y); }
};

template <class R>
struct FieldValue {
    std::vector<R> dx, dy;
    int trusted_max = 0; // entries above this read zero padding
};

namespace detail {

template <class R>
R padded(const std::vector<R>& a, int k)
{
    if (k < 0 || k >= static_cast<int>(a.size()))
        return lift<R>(0);
    return a[k];
}

} // namespace detail

// Component fields of the first two Toeplitz flows in each time family.
template <class R>
FieldValue<R> vector_field(const FlowState<R>& s, Flow f)
{
    if (s.y.size() != s.x.size())
        throw ContractViolation("flow state x and y differ in length");
    int M = s.n_max();
    auto X = [&](int k) -> R { return detail::padded(s.x, k); };
    auto Y = [&](int k) -> R { return detail::padded(s.y, k); };
    auto V = [&](int k) -> R { return lift<R>(1) - X(k) * Y(k); };
    FieldValue<R> r;
    r.dx.assign(M + 1, lift<R>(0));
    r.dy.assign(M + 1, lift<R>(0));
    r.trusted_max = (f == Flow::t2 || f == Flow::s2) ? M - 2 : M - 1;
    for (int n = 1; n <= M; ++n) {
        R v = V(n);
        switch (f) {
        case Flow::t1:
            r.dx[n] = v * X(n + 1);
            r.dy[n] = -(v * Y(n - 1));
            break;
        case Flow::s1:
            r.dx[n] = v * X(n - 1);
            r.dy[n] = -(v * Y(n + 1));
            break;
        case Flow::t2:
            r.dx[n] = -(v * (X(n + 1) * X(n + 1) * Y(n) - X(n + 2) * V(n + 1) + X(n) * X(n + 1) * Y(n - 1)));
            r.dy[n] = v * (X(n) * Y(n - 1) * Y(n - 1) - Y(n - 2) * V(n - 1) + Y(n) * Y(n - 1) * X(n + 1));
            break;
        case Flow::s2:
            r.dx[n] = -(v * (X(n - 1) * X(n - 1) * Y(n) - X(n - 2) * V(n - 1) + X(n) * X(n - 1) * Y(n + 1)));
            r.dy[n] = v * (X(n) * Y(n + 1) * Y(n + 1) - Y(n + 2) * V(n + 1) + Y(n) * Y(n + 1) * X(n - 1));
            break;
        case Flow::t_selfdual:
            r.dx[n] = v * (X(n + 1) - X(n - 1));
            r.dy[n] = r.dx[n];
            break;
        }
    }
    return r;
}

// du/dtime under the flow: u_i moves with i t_i and u_{-i} with -i s_i.
template <class R>
void exponent_drift(Flow f, std::vector<R>& du_plus, std::vector<R>& du_minus)
{
    auto bump = [](std::vector<R>& u, size_t i, long c) {
        if (u.size() <= i)
            u.resize(i + 1, lift<R>(0));
        u[i] = u[i] + lift<R>(Rational(c));
    };
    switch (f) {
    case Flow::t1:
        bump(du_plus, 0, 1);
        break;
    case Flow::s1:
        bump(du_minus, 0, -1);
        break;
    case Flow::t2:
        bump(du_plus, 1, 2);
        break;
    case Flow::s2:
        bump(du_minus, 1, -2);
        break;
    case Flow::t_selfdual:
        bump(du_plus, 0, 1);
        bump(du_minus, 0, 1);
        break;
    }
}

// Closed forms over the available indices:
//   H_1^(1) = sum x_{i+1} y_i,  H_1^(2) = sum x_i y_{i+1},
//   H_2^(1) = -1/2 sum x_{i+1}^2 y_i^2 + sum y_i x_{i+2} v_{i+1},
//   H_2^(2) = -1/2 sum x_i^2 y_{i+1}^2 + sum x_i y_{i+2} v_{i+1}.
template <class R>
R hamiltonian(const std::vector<R>& x, const std::vector<R>& y, int i, int k)
{
    if ((i != 1 && i != 2) || (k != 1 && k != 2))
        throw ContractViolation("hamiltonians are implemented for i, k in {1, 2}");
    int M = static_cast<int>(x.size()) - 1;
    const std::vector<R>& a = k == 1 ? x : y;
    const std::vector<R>& b = k == 1 ? y : x;
    R h = lift<R>(0);
    if (i == 1) {
        for (int j = 0; j + 1 <= M; ++j)
            h = h + a[j + 1] * b[j];
        return h;
    }
    R half = lift<R>(rat(1, 2));
    for (int j = 0; j + 1 <= M; ++j)
        h = h - half * a[j + 1] * a[j + 1] * b[j] * b[j];
    for (int j = 0; j + 2 <= M; ++j)
        h = h + b[j] * a[j + 2] * (lift<R>(1) - x[j + 1] * y[j + 1]);
    return h;
}

// -1/i sum_{n=1}^{terms} (L_k^i)_{nn} through the band algebra.
template <class R>
R hamiltonian_trace(const LatticeView<R>& lv, int i, int k, int terms)
{
    R tr = lift<R>(0);
    for (int n = 1; n <= terms; ++n)
        tr = tr + lv.power_entry(k, i, n, n);
    return -(tr * lift<R>(rat(1, i)));
}

struct IdentityCheck {
    std::string name;
    int n = 0;
    bool ok = false;
    std::string detail;
};

struct FlowReport {
    std::vector<IdentityCheck> checks;
    bool passed = true;
    double max_residual = 0; // floating-point checks only
    int order = 0;           // exact checks only

    void add(std::string name, int n, bool ok, std::string detail = {});
};

// Classical fourth-order Runge-Kutta along one flow, exponents drifting with it.
// The observer, when given, sees the state after every step.
FlowState<double> rk4_integrate(FlowState<double> s, Flow f, double dt, int steps,
                                const std::function<void(int, const FlowState<double>&)>& observer = {});

// Flow state of a numeric weight at its own parameters.
FlowState<double> numeric_flow_state(const WeightSpec& w, int n_max);

// Exact checks on determinant states over a graded ring with live times t1, s1,
// t2, s2 and the weight's exponents scaled by a grading variable t:
//   the Toeplitz fields of the four flows, the diagonal derivatives of L_k^i
//   under t1 and s1 for i <= 3, the combined derivative identities of x_n and y_n,
//   and the ladder x_{n+1} y_n = -d/dt1 log h_n, y_{n+1} x_n = d/ds1 log h_n.
// Raises IdentityFailure on the first nonzero residual.
FlowReport check_flow_identities(const Weight<Rational>& w, int order, int n_max);

// Exact check, on arbitrary rational data, of the evolution of the Case 3 pair:
//   t1: dG_n = v_n G_{n+1} + x_{n+1}(x_n G~_n - y_n G_n), dG~_n = -v_n G~_{n-1} + y_{n-1}(x_n G~_n - y_n G_n),
//   s1: the same with n+1 and n-1 exchanged,
//   t_selfdual: dG_n = v_n (G_{n+1} - G_{n-1}).
// The derivative is taken along the field by first-order dual numbers.
FlowReport check_gamma_evolution_exact(const LatticeView<Rational>& lv, const Weight<Rational>& w, Flow f,
                                       int n_lo, int n_hi);

// Central differences of G_n, G~_n along the flow against the evolution law at an
// arbitrary state, on or off the manifold.
FlowReport evolution_law_check(const FlowState<double>& s, Flow f, int n_lo, int n_hi, double fd_dt = 1e-4,
                               double fd_tol = 1e-7);

// Integrates a determinant-seeded numeric state and checks at every step that
// max |G_n|, |G~_n| over n_lo..n_hi stays below tol, and at sampled times that
// the evolution law holds for central differences with step fd_dt.
FlowReport gamma_evolution_check(const WeightSpec& w, Flow f, int n_lo, int n_hi, double dt, int steps,
                                 double tol = 1e-8, double fd_dt = 1e-4, double fd_tol = 1e-7);

} // namespace toeplab
