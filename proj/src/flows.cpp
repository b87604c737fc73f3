#include "toeplab/flows.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace toeplab {

std::string flow_name(Flow f)
{
    switch (f) {
    case Flow::t1:
        return "t1";
    case Flow::s1:
        return "s1";
    case Flow::t2:
        return "t2";
    case Flow::s2:
        return "s2";
    case Flow::t_selfdual:
        return "t";
    }
    return "unknown";
}

Flow parse_flow(const std::string& name)
{
    for (Flow f : {Flow::t1, Flow::s1, Flow::t2, Flow::s2, Flow::t_selfdual})
        if (flow_name(f) == name)
            return f;
    throw ParseError("unknown flow '" + name + "' (expected t1, s1, t2, s2 or t)");
}

void FlowReport::add(std::string name, int n, bool ok, std::string detail)
{
    passed = passed && ok;
    checks.push_back({std::move(name), n, ok, std::move(detail)});
}

namespace {

void check_finite(const FlowState<double>& s, int step)
{
    for (size_t k = 0; k < s.x.size(); ++k)
        if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
            throw IntegrationDiverged("non-finite value at step " + std::to_string(step) + ", index " +
                                      std::to_string(k));
}

FlowState<double> shifted(const FlowState<double>& s, const FieldValue<double>& k, double h)
{
    FlowState<double> r = s;
    for (size_t i = 0; i < r.x.size(); ++i) {
        r.x[i] += h * k.dx[i];
        r.y[i] += h * k.dy[i];
    }
    return r;
}

} // namespace

FlowState<double> rk4_integrate(FlowState<double> s, Flow f, double dt, int steps,
                                const std::function<void(int, const FlowState<double>&)>& observer)
{
    if (steps < 0)
        throw ContractViolation("negative step count");
    if (!std::isfinite(dt))
        throw ContractViolation("non-finite step size");
    if (f == Flow::t_selfdual && s.x != s.y)
        throw ContractViolation("the self-dual flow needs x = y");
    std::vector<double> du_plus, du_minus;
    exponent_drift(f, du_plus, du_minus);
    for (int step = 1; step <= steps; ++step) {
        auto k1 = vector_field(s, f);
        auto k2 = vector_field(shifted(s, k1, dt / 2), f);
        auto k3 = vector_field(shifted(s, k2, dt / 2), f);
        auto k4 = vector_field(shifted(s, k3, dt), f);
        for (size_t i = 0; i < s.x.size(); ++i) {
            s.x[i] += dt / 6 * (k1.dx[i] + 2 * k2.dx[i] + 2 * k3.dx[i] + k4.dx[i]);
            s.y[i] += dt / 6 * (k1.dy[i] + 2 * k2.dy[i] + 2 * k3.dy[i] + k4.dy[i]);
        }
        auto drift = [dt](std::vector<double>& u, const std::vector<double>& du) {
            if (u.size() < du.size())
                u.resize(du.size(), 0.0);
            for (size_t i = 0; i < du.size(); ++i)
                u[i] += dt * du[i];
        };
        drift(s.weight.u_plus, du_plus);
        drift(s.weight.u_minus, du_minus);
        s.time += dt;
        check_finite(s, step);
        if (observer)
            observer(step, s);
    }
    return s;
}

FlowState<double> numeric_flow_state(const WeightSpec& w, int n_max)
{
    auto st = build_numeric_state(w, n_max);
    FlowState<double> s;
    s.x = st.x;
    s.y = st.y;
    s.weight = lift_weight<double>(w);
    return s;
}

namespace {

// Variable indices of the live-time ring.
enum : int { var_t = 0, var_t1 = 1, var_s1 = 2, var_t2 = 3, var_s2 = 4 };

int flow_var(Flow f)
{
    switch (f) {
    case Flow::t1:
        return var_t1;
    case Flow::s1:
        return var_s1;
    case Flow::t2:
        return var_t2;
    case Flow::s2:
        return var_s2;
    default:
        throw ContractViolation("no live variable for the self-dual flow");
    }
}

struct LiveState {
    ToeplitzState<GradedPoly> st;
    LatticeView<GradedPoly> lv;
};

LiveState live_state(const Weight<Rational>& w, int order, int n_max)
{
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"t", "t1", "s1", "t2", "s2"},
                                         std::vector<int>{1, 1, 1, 2, 2});
    auto scaled = [&](const std::vector<Rational>& u, int live1, int live2, long sign) {
        std::vector<GradedPoly> r;
        size_t len = std::max<size_t>(u.size(), 2);
        for (size_t i = 0; i < len; ++i) {
            GradedPoly p(vars, order);
            if (i < u.size() && u[i] != 0)
                p += GradedPoly::variable(vars, order, var_t, u[i]);
            if (i < 2)
                p += GradedPoly::variable(vars, order, i == 0 ? live1 : live2, Rational(sign * (long)(i + 1)));
            r.push_back(p);
        }
        return r;
    };
    Weight<GradedPoly> gw = with_exponents(w, scaled(w.u_plus, var_t1, var_t2, 1), scaled(w.u_minus, var_s1, var_s2, -1));
    LiveState ls{build_state(gw, n_max), {}};
    ls.lv = LatticeView<GradedPoly>(ls.st);
    return ls;
}

void require(FlowReport& rep, const std::string& name, int n, const GradedPoly& residual)
{
    bool ok = residual.is_zero();
    rep.add(name, n, ok, ok ? std::string() : residual.to_string());
    if (!ok)
        throw IdentityFailure(name + " fails at n = " + std::to_string(n) + ": residual " + residual.to_string());
}

struct Combo {
    Rational alpha1, alpha2, beta1, beta2;
};

} // namespace

FlowReport check_flow_identities(const Weight<Rational>& w, int order, int n_max)
{
    if (n_max < 4)
        throw ContractViolation("flow identity checks need n_max >= 4");
    LiveState ls = live_state(w, order, n_max);
    const auto& st = ls.st;
    const auto& lv = ls.lv;
    FlowReport rep;
    rep.order = order;
    auto X = [&](int k) -> GradedPoly { return k < 0 ? GradedPoly(0) : st.x[k]; };
    auto Y = [&](int k) -> GradedPoly { return k < 0 ? GradedPoly(0) : st.y[k]; };
    auto d = [](const GradedPoly& p, int var) { return p.derivative(var); };

    // Toeplitz fields: the derivative of the determinant state against the field.
    FlowState<GradedPoly> fs{st.x, st.y, {}, 0};
    for (Flow f : {Flow::t1, Flow::s1, Flow::t2, Flow::s2}) {
        auto field = vector_field(fs, f);
        for (int n = 0; n <= field.trusted_max; ++n) {
            require(rep, "d x_n / d " + flow_name(f), n, d(st.x[n], flow_var(f)) - field.dx[n]);
            require(rep, "d y_n / d " + flow_name(f), n, d(st.y[n], flow_var(f)) - field.dy[n]);
        }
    }

    // Diagonal derivatives of L_k^i under t1 and s1.
    for (int i = 1; i <= 3; ++i)
        for (int n = 1; n + i <= n_max; ++n) {
            auto P = [&](int which, int r, int c) -> GradedPoly {
                if (r < 1 || c < 1)
                    return GradedPoly(0);
                return lv.power_entry(which, i, r, c);
            };
            auto v = [&](int k) -> GradedPoly { return k < 1 ? GradedPoly(0) : st.v[k]; };
            std::string tag = " i=" + std::to_string(i);
            require(rep, "d(L1^i)_nn/dt1" + tag, n,
                    d(P(1, n, n), var_t1) - (v(n) * P(1, n + 1, n) - v(n - 1) * P(1, n, n - 1)));
            require(rep, "d(L2^i)_nn/dt1" + tag, n, d(P(2, n, n), var_t1) - (P(2, n + 1, n) - P(2, n, n - 1)));
            require(rep, "d(L1^i)_nn/ds1" + tag, n, d(P(1, n, n), var_s1) - (P(1, n - 1, n) - P(1, n, n + 1)));
            require(rep, "d(L2^i)_nn/ds1" + tag, n,
                    d(P(2, n, n), var_s1) - (v(n - 1) * P(2, n - 1, n) - v(n) * P(2, n, n + 1)));
        }

    // Combined derivatives of x_n and y_n, multiplied through by v_n / y_n and v_n / x_n.
    std::vector<Combo> combos = {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {2, -1, 3, rat(1, 2)}};
    Abc abc{rat(2, 3), rat(-1, 5), 3};
    combos.push_back({abc.c, 0, abc.a, 0});
    for (const auto& c : combos) {
        std::ostringstream os;
        os << " (" << c.alpha1 << "," << c.alpha2 << "," << c.beta1 << "," << c.beta2 << ")";
        Rational al[3] = {0, c.alpha1, c.alpha2};
        Rational be[3] = {0, c.beta1, c.beta2};
        for (int n = 1; n + 2 <= n_max; ++n) {
            auto D = [&](const GradedPoly& p) -> GradedPoly {
                GradedPoly r(0);
                r += d(p, var_t1) * GradedPoly(al[1]);
                r += d(p, var_t2) * GradedPoly(al[2]);
                r -= d(p, var_s1) * GradedPoly(be[1]);
                r -= d(p, var_s2) * GradedPoly(be[2]);
                return r;
            };
            GradedPoly rx(0), ry(0);
            for (int i = 1; i <= 2; ++i) {
                GradedPoly a(al[i]), b(be[i]);
                rx += a * (-lv.power_entry(1, i, n + 1, n + 1) + lv.power_entry(1, i - 1, n + 1, n)) +
                      b * (lv.power_entry(2, i, n, n) - lv.power_entry(2, i - 1, n, n + 1));
                ry += a * (lv.power_entry(1, i, n, n) - lv.power_entry(1, i - 1, n + 1, n)) -
                      b * (lv.power_entry(2, i, n + 1, n + 1) - lv.power_entry(2, i - 1, n, n + 1));
            }
            require(rep, "combined derivative of x_n" + os.str(), n, st.y[n] * D(st.x[n]) - st.v[n] * rx);
            require(rep, "combined derivative of y_n" + os.str(), n, st.x[n] * D(st.y[n]) - st.v[n] * ry);
        }
    }
    // The (c, a) combination in closed form.
    for (int n = 1; n + 1 <= n_max; ++n) {
        GradedPoly c(abc.c), a(abc.a);
        GradedPoly Dx = c * d(st.x[n], var_t1) - a * d(st.x[n], var_s1);
        GradedPoly Dy = c * d(st.y[n], var_t1) - a * d(st.y[n], var_s1);
        require(rep, "combined derivative of x_n, first flows", n,
                st.y[n] * Dx - st.v[n] * (c * X(n + 1) * Y(n) - a * X(n - 1) * Y(n)));
        require(rep, "combined derivative of y_n, first flows", n,
                st.x[n] * Dy - st.v[n] * (a * X(n) * Y(n + 1) - c * X(n) * Y(n - 1)));
    }

    // Ladder through h_n = I_{n+1} / I_n.
    for (int n = 0; n + 1 <= n_max; ++n) {
        const GradedPoly& h = st.h[n];
        require(rep, "x_{n+1} y_n = -d log h_n / dt1", n, h * X(n + 1) * Y(n) + d(h, var_t1));
        require(rep, "y_{n+1} x_n = d log h_n / ds1", n, h * Y(n + 1) * X(n) - d(h, var_s1));
    }
    return rep;
}

namespace {

template <class R>
R gamma_of(const LatticeView<R>& lv, const Weight<R>& w, Flow f, int n, bool tilde)
{
    if (f == Flow::t_selfdual)
        return residual_selfdual(lv, w.u_plus, n);
    return tilde ? residual_gamma_tilde(lv, w, n) : residual_gamma(lv, w, n);
}

// Right side of the evolution law at n.
template <class R>
R gamma_law(const LatticeView<R>& lv, const Weight<R>& w, Flow f, int n, bool tilde)
{
    auto G = [&](int k) -> R { return gamma_of(lv, w, f, k, false); };
    auto Gt = [&](int k) -> R { return gamma_of(lv, w, f, k, true); };
    if (f == Flow::t_selfdual)
        return lv.v(n) * (G(n + 1) - G(n - 1));
    int s = f == Flow::t1 ? 1 : -1;
    R mix = lv.x(n) * Gt(n) - lv.y(n) * G(n);
    if (!tilde)
        return lv.v(n) * G(n + s) + lv.x(n + s) * mix;
    return -(lv.v(n) * Gt(n - s)) + lv.y(n - s) * mix;
}

void check_flow_kind(Flow f)
{
    if (f != Flow::t1 && f != Flow::s1 && f != Flow::t_selfdual)
        throw ContractViolation("evolution laws are stated for the t1, s1 and self-dual flows");
}

} // namespace

FlowReport check_gamma_evolution_exact(const LatticeView<Rational>& lv, const Weight<Rational>& w, Flow f,
                                       int n_lo, int n_hi)
{
    check_flow_kind(f);
    if (n_lo < 2)
        throw ContractViolation("evolution laws read G_{n-1}; need n_lo >= 2");
    FlowState<Rational> fs;
    for (int k = 0; k <= lv.max_index(); ++k) {
        fs.x.push_back(lv.x(k));
        fs.y.push_back(lv.y(k));
    }
    if (f == Flow::t_selfdual && fs.x != fs.y)
        throw ContractViolation("the self-dual flow needs x = y");
    auto field = vector_field(fs, f);
    std::vector<Series> dx, dy;
    for (int k = 0; k <= field.trusted_max; ++k) {
        dx.push_back(Series({fs.x[k], field.dx[k]}, 1));
        dy.push_back(Series({fs.y[k], field.dy[k]}, 1));
    }
    std::vector<Rational> du_plus, du_minus;
    exponent_drift(f, du_plus, du_minus);
    auto dual = [](const std::vector<Rational>& u, const std::vector<Rational>& du) {
        std::vector<Series> r;
        for (size_t i = 0; i < std::max(u.size(), du.size()); ++i)
            r.push_back(Series({i < u.size() ? u[i] : Rational(0), i < du.size() ? du[i] : Rational(0)}, 1));
        return r;
    };
    Weight<Series> dw = with_exponents(w, dual(w.u_plus, du_plus), dual(w.u_minus, du_minus));
    Weight<Rational> w0 = with_exponents(w, w.u_plus, w.u_minus);
    w0.u_plus.resize(dw.u_plus.size(), 0);
    w0.u_minus.resize(dw.u_minus.size(), 0);
    LatticeView<Series> dv(dx, dy);
    FlowReport rep;
    for (int n = n_lo; n <= n_hi; ++n)
        for (bool tilde : {false, true}) {
            if (tilde && f == Flow::t_selfdual)
                continue;
            Rational lhs = gamma_of(dv, dw, f, n, tilde).coeff(1);
            Rational rhs = gamma_law(lv, w0, f, n, tilde);
            std::string name = std::string(tilde ? "dG~_n/d" : "dG_n/d") + flow_name(f);
            rep.add(name, n, lhs == rhs, lhs == rhs ? "" : format_rational(lhs) + " vs " + format_rational(rhs));
        }
    return rep;
}

FlowReport evolution_law_check(const FlowState<double>& st, Flow f, int n_lo, int n_hi, double fd_dt, double fd_tol)
{
    check_flow_kind(f);
    if (n_lo < 2)
        throw ContractViolation("evolution laws read G_{n-1}; need n_lo >= 2");
    FlowReport rep;
    auto plus = rk4_integrate(st, f, fd_dt, 1);
    auto minus = rk4_integrate(st, f, -fd_dt, 1);
    for (int n = n_lo; n <= n_hi; ++n)
        for (bool tilde : {false, true}) {
            if (tilde && f == Flow::t_selfdual)
                continue;
            double fd = (gamma_of(plus.view(), plus.weight, f, n, tilde) -
                         gamma_of(minus.view(), minus.weight, f, n, tilde)) /
                        (2 * fd_dt);
            double rhs = gamma_law(st.view(), st.weight, f, n, tilde);
            double err = std::abs(fd - rhs);
            rep.max_residual = std::max(rep.max_residual, err);
            rep.add("evolution law", n, err <= fd_tol, "|difference| = " + to_string(err));
        }
    return rep;
}

FlowReport gamma_evolution_check(const WeightSpec& w, Flow f, int n_lo, int n_hi, double dt, int steps, double tol,
                                 double fd_dt, double fd_tol)
{
    check_flow_kind(f);
    if (n_lo < 2)
        throw ContractViolation("evolution laws read G_{n-1}; need n_lo >= 2");
    int reach = std::max(w.N1(), w.N2());
    FlowState<double> s = numeric_flow_state(w, n_hi + 2 * reach + 12);
    if (f == Flow::t_selfdual)
        s.y = s.x;
    FlowReport rep;
    auto gammas = [&](const FlowState<double>& st, int n, bool tilde) {
        return gamma_of(st.view(), st.weight, f, n, tilde);
    };
    auto scan = [&](const FlowState<double>& st, int step) {
        double worst = 0;
        for (int n = n_lo - 1; n <= n_hi + 1; ++n) {
            worst = std::max(worst, std::abs(gammas(st, n, false)));
            if (f != Flow::t_selfdual)
                worst = std::max(worst, std::abs(gammas(st, n, true)));
        }
        rep.max_residual = std::max(rep.max_residual, worst);
        if (worst > tol)
            rep.add("invariant manifold", step, false, "max |G| = " + to_string(worst));
    };
    auto law = [&](const FlowState<double>& st, int step) {
        auto sub = evolution_law_check(st, f, n_lo, n_hi, fd_dt, fd_tol);
        for (auto& c : sub.checks)
            if (!c.ok)
                rep.add(c.name, c.n, false, "step " + std::to_string(step) + ": " + c.detail);
    };
    scan(s, 0);
    law(s, 0);
    int stride = std::max(1, steps / 4);
    rk4_integrate(s, f, dt, steps, [&](int step, const FlowState<double>& st) {
        scan(st, step);
        if (step % stride == 0)
            law(st, step);
    });
    if (rep.passed)
        rep.add("invariant manifold and evolution law", n_hi, true,
                "max |G| = " + to_string(rep.max_residual) + " over " + std::to_string(steps) + " steps");
    return rep;
}

} // namespace toeplab
