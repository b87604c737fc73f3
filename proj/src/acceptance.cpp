#include "toeplab/acceptance.hpp"

#include "toeplab/combinatorics.hpp"
#include "toeplab/errors.hpp"
#include "toeplab/flows.hpp"
#include "toeplab/recursion.hpp"
#include "toeplab/toeplitz.hpp"
#include "toeplab/virasoro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace toeplab {

namespace {

struct Tally {
    int checks = 0;
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok)
            failures.push_back(what);
    }

    bool passed() const { return checks > 0 && failures.empty(); }

    std::string summary() const
    {
        std::ostringstream os;
        os << checks << " checks";
        if (!failures.empty())
            os << ", " << failures.size() << " failed; first: " << failures.front();
        if (!note.empty())
            os << "; " << note;
        return os.str();
    }
};

std::string at(const std::string& what, int n) { return what + " at n = " + std::to_string(n); }

Weight<Rational> rational_weight(std::vector<Rational> up, std::vector<Rational> um, int gamma = 0)
{
    Weight<Rational> w;
    w.u_plus = std::move(up);
    w.u_minus = std::move(um);
    w.gamma = gamma;
    return w;
}

// u_i = r_i t as series of the given order.
Weight<Series> series_weight(const Weight<Rational>& w, int order)
{
    std::vector<Series> up, um;
    for (const auto& r : w.u_plus)
        up.push_back(Series::variable(order, r));
    for (const auto& r : w.u_minus)
        um.push_back(Series::variable(order, r));
    return with_exponents(w, up, um);
}

Weight<Series> symmetric_exponential(int order) { return series_weight(rational_weight({1}, {1}), order); }

// e^{t(z + 1/z) + s(z^2 + 1/z^2)} along s = sigma t.
Weight<Series> quartic_exponential(int order, const Rational& sigma)
{
    Weight<Series> w;
    w.u_plus = {Series::variable(order), Series::variable(order, 2 * sigma)};
    w.u_minus = w.u_plus;
    return w;
}

// (1 + z)^alpha e^{-s/z}.
Weight<Series> word_weight(int order, int alpha)
{
    Weight<Rational> w = rational_weight({}, {-1});
    w.d1 = -1;
    w.gp1 = alpha;
    return series_weight(w, order);
}

// (1 - xi z)^alpha (1 - xi/z)^beta.
Weight<Rational> binomial_weight(const Rational& xi, int alpha, int beta)
{
    Weight<Rational> w;
    w.d1 = xi;
    w.gp1 = alpha;
    w.d2 = 1 / xi;
    w.gpp2 = beta;
    return w;
}

Weight<Series> case1_weight(int order)
{
    Weight<Rational> w = rational_weight({rat(1, 2)}, {rat(-2, 3)});
    w.d1 = 2;
    w.gp1 = 1;
    w.d2 = 3;
    w.gpp2 = 1;
    return series_weight(w, order);
}

Weight<Series> generic_case3(int order)
{
    return series_weight(rational_weight({rat(1, 2), rat(2, 7)}, {rat(-1, 3)}), order);
}

Weight<Series> generic_weight(int order)
{
    Weight<Rational> w = rational_weight({rat(1, 2), rat(-1, 3)}, {rat(2, 5)}, 1);
    w.d1 = 2;
    w.gp1 = 1;
    w.d2 = rat(-1, 3);
    w.gpp2 = 2;
    return series_weight(w, order);
}

WeightSpec numeric_weight(std::vector<Rational> up, std::vector<Rational> um)
{
    WeightSpec w;
    static_cast<Weight<Rational>&>(w) = rational_weight(std::move(up), std::move(um));
    w.mode = Mode::numeric;
    return w;
}

Rational small_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

// A series is zero to order D when it vanishes and is known at least that far.
bool zero_to(const Series& s, int order) { return s.is_zero() && s.order() >= order; }
bool zero_to(const GradedPoly& p, int order) { return p.is_zero() && p.order() >= order; }

// 1e-10 absolute while the window stays within |x| <= 10; beyond that rounding
// in the quartic invariant grows like max |x|^4.
bool invariant_close(double shift, const std::vector<double>& x, int lo, int hi, int& wide)
{
    double big = 0;
    for (int k = lo; k <= hi; ++k)
        big = std::max(big, std::abs(x[k]));
    if (big <= 10)
        return std::abs(shift) < 1e-10;
    ++wide;
    return std::abs(shift) < 1e-10 * std::pow(big, 4);
}

void merge(Tally& t, const FlowReport& rep, const std::string& prefix)
{
    for (const auto& c : rep.checks)
        t.expect(c.ok, prefix + c.name + " n = " + std::to_string(c.n) + " " + c.detail);
}

// Gessel identity against enumeration of S_k.
Tally gessel()
{
    Tally t;
    for (int n = 0; n <= 8; ++n) {
        auto rep = generating_identity_check(OracleModel::permutations, n, 8, 0, false);
        for (const auto& e : rep.entries)
            t.expect(e.ok, "k = " + std::to_string(e.k) + " n = " + std::to_string(n));
    }
    return t;
}

Tally three_step()
{
    Tally t;
    int order = 12;
    auto w = symmetric_exponential(order);
    auto st = build_state(w, 7);
    LatticeView<Series> lv(st);
    Series tv = Series::variable(order);
    for (int n = 1; n <= 6; ++n) {
        Series display =
            Series(n) * st.x[n] + tv * (Series(1) - st.x[n] * st.x[n]) * (st.x[n + 1] + st.x[n - 1]);
        t.expect(zero_to(display, order), at("displayed relation", n));
        t.expect(zero_to(residual_selfdual(lv, w.u_plus, n), order), at("self-dual residual", n));
    }
    int seed_order = 24;
    auto ws = symmetric_exponential(seed_order);
    auto det = build_state(ws, 10);
    CaseTag tag = classify_case(ws);
    auto solved = solve_forward(seed_view(det, first_solvable_index(tag.id, ws.N1(), ws.N2())), ws, tag, 10);
    t.expect(solved.max_index() == 10, "solver reaches n = 10");
    auto deltas = check_consistency(solved, det, false);
    for (const auto& d : deltas) {
        t.expect(solved.x(d.n).order() >= order, at("solved order", d.n));
        t.expect(is_zero(d.dx) && is_zero(d.dy), at("solved against determinant", d.n));
    }
    t.expect(solved.x(2).coeff(2) == rat(1, 2) && solved.x(2).coeff(3) == 0, "x_2 = t^2/2 + O(t^4)");
    return t;
}

Tally five_step()
{
    Tally t;
    int order = 10;
    Rational sigma = rat(1, 3);
    auto w = quartic_exponential(order, sigma);
    auto st = build_state(w, 6);
    LatticeView<Series> lv(st);
    for (int n = 1; n <= 4; ++n)
        t.expect(zero_to(residual_selfdual(lv, w.u_plus, n), order), at("5-step residual", n));

    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> seed(-0.3, 0.3);
    int orbits = 0, wide = 0;
    for (int trial = 0; trial < 10; ++trial) {
        CaseTag tag;
        tag.id = CaseId::self_dual;
        double tv = 0.2 + 0.3 * std::abs(seed(rng)), sv = 0.1 + std::abs(seed(rng));
        Weight<double> w3;
        w3.u_plus = {tv};
        w3.u_minus = w3.u_plus;
        std::vector<double> x3{1, seed(rng)};
        Weight<double> w5;
        w5.u_plus = {tv, 2 * sv};
        w5.u_minus = w5.u_plus;
        std::vector<double> x5{1, seed(rng), seed(rng)};
        try {
            auto o3 = solve_forward(LatticeView<double>(x3, x3), w3, tag, 8);
            auto o5 = solve_forward(LatticeView<double>(x5, x5), w5, tag, 9);
            std::vector<double> a, b;
            for (int k = 0; k <= o3.max_index(); ++k)
                a.push_back(o3.x(k));
            for (int k = 0; k <= o5.max_index(); ++k)
                b.push_back(o5.x(k));
            for (int n = 1; n <= 6; ++n)
                t.expect(invariant_close(invariant_shift_3step(n, tv, a), a, n - 1, n + 1, wide),
                         at("3-step invariant shift", n));
            for (int m = 3; m <= 7; ++m)
                t.expect(invariant_close(invariant_shift_5step(m, tv, sv, b), b, m - 2, m + 2, wide),
                         at("5-step invariant shift", m));
            ++orbits;
        } catch (const UnsolvableStep&) {
        }
    }
    t.expect(orbits >= 5, "at least five float orbits");
    t.note = std::to_string(orbits) + " float orbit pairs, " + std::to_string(wide) +
             " windows with |x| > 10 held to 1e-10 relative to max |x|^4";
    return t;
}

Tally case1()
{
    Tally t;
    int order = 10;
    auto w = case1_weight(order);
    auto st = build_state(w, 7);
    LatticeView<Series> lv(st);
    CaseTag tag = classify_case(w);
    t.expect(tag.id == CaseId::case1, "weight classifies as Case 1");
    for (int n = 1; n <= 4; ++n) {
        t.expect(zero_to(residual_case12_first(lv, w, tag.abc, n), order), at("first relation", n));
        t.expect(zero_to(residual_case12_second(lv, w, tag.abc, n), order), at("second relation", n));
        t.expect(zero_to(residual_case12_dual_second(lv, w, tag.abc, n), order), at("dual second relation", n));
    }
    Series C = case12_constant(lv, w, tag.abc, 1);
    Series Cd = case12_dual_constant(lv, w, tag.abc, 1);
    for (int m = 2; m <= 4; ++m) {
        t.expect(case12_constant(lv, w, tag.abc, m) == C, at("constant recomputed", m));
        t.expect(case12_dual_constant(lv, w, tag.abc, m) == Cd, at("dual constant recomputed", m));
    }
    t.note = "C = " + C.to_string();
    return t;
}

Tally case2()
{
    Tally t;
    int order = 10;
    for (int alpha : {1, 2}) {
        std::string tag_a = "alpha = " + std::to_string(alpha) + " ";
        auto w = word_weight(order, alpha);
        auto st = build_state(w, 8);
        LatticeView<Series> lv(st);
        const auto& x = st.x;
        const auto& y = st.y;
        const auto& v = st.v;
        Series s = Series::variable(order);
        for (int n = 1; n <= 4; ++n) {
            Series three = -Series(n + alpha + 1) * x[n + 1] * y[n] - s * x[n] * y[n + 1] +
                           Series(n + alpha - 1) * x[n] * y[n - 1] + s * x[n - 1] * y[n];
            t.expect(zero_to(three, order), at(tag_a + "3-step display", n));
        }
        Series rhs = v[1] * (s - Series(2 + alpha) * x[2]) + x[1] * (x[1] - Series(1));
        for (int n = 2; n <= 4; ++n) {
            Series four = -v[n] * (Series(n + alpha + 1) * x[n + 1] * y[n - 1] - s) +
                          v[n - 1] * (Series(n + alpha - 2) * x[n] * y[n - 2] - s) +
                          x[n] * y[n - 1] * (x[n] * y[n - 1] - Series(1));
            t.expect(zero_to(four - rhs, order), at(tag_a + "4-step display", n));
        }
        for (const Abc& abc : {Abc{0, 1, 1}, Abc{1, 1, 0}}) {
            std::string tag_t = tag_a + "(" + to_string(abc.a) + "," + to_string(abc.b) + "," + to_string(abc.c) + ") ";
            t.expect(admissible_abc(w, abc), tag_t + "admissible");
            for (int n = 1; n <= 4; ++n) {
                t.expect(zero_to(residual_case12_first(lv, w, abc, n), order), at(tag_t + "first", n));
                t.expect(zero_to(residual_case12_second(lv, w, abc, n), order), at(tag_t + "second", n));
                t.expect(zero_to(residual_case12_dual_second(lv, w, abc, n), order), at(tag_t + "dual second", n));
            }
        }
    }
    return t;
}

Tally case3()
{
    Tally t;
    int order = 10;
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"a", "b"}, std::vector<int>{1, 1});
    Weight<GradedPoly> w;
    w.u_plus = {GradedPoly::variable(vars, order, 0)};
    w.u_minus = {GradedPoly::variable(vars, order, 1)};
    t.expect(classify_case(w).id == CaseId::case3, "weight classifies as Case 3");
    auto st = build_state(w, 7);
    LatticeView<GradedPoly> lv(st);
    auto dw = dual_weight(w);
    auto ds = build_state(dw, 7);
    for (int n = 1; n <= 5; ++n) {
        auto g = residual_case3(lv, w, n);
        t.expect(zero_to(g.gamma, order), at("Gamma", n));
        t.expect(zero_to(g.gamma_tilde, order), at("Gamma~", n));
        t.expect(ds.x[n] == st.y[n] && ds.y[n] == st.x[n], at("dual state swaps x and y", n));
    }
    // Off the manifold the dual map exchanges the pair identically.
    std::mt19937_64 rng(60);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> x{1}, y{1}, up, um;
        for (int k = 1; k <= 10; ++k) {
            x.push_back(small_rational(rng));
            y.push_back(small_rational(rng));
        }
        for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i)
            up.push_back(small_rational(rng));
        for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i)
            um.push_back(small_rational(rng));
        Weight<Rational> rw = rational_weight(up, um);
        LatticeView<Rational> rv(x, y);
        for (int n = 1; n <= 5; ++n) {
            auto g = residual_case3(rv, rw, n);
            auto d = residual_case3(rv.swapped(), dual_weight(rw), n);
            t.expect(g.gamma == d.gamma_tilde && g.gamma_tilde == d.gamma, at("duality exchange", n));
        }
    }
    return t;
}

Tally binomial_solver()
{
    Tally t;
    auto w = binomial_weight(rat(1, 2), 1, 1);
    auto st = build_state(w, 8);
    CaseTag tag = classify_case(w);
    auto solved = solve_forward(seed_view(st, 3), w, tag, 8);
    t.expect(solved.max_index() == 8, "solver reaches n = 8");
    for (const auto& d : check_consistency(solved, st, false))
        t.expect(d.dx == 0 && d.dy == 0, at("delta against determinant", d.n));
    t.note = "x_3 = " + to_string(solved.x(3)) + ", y_3 = " + to_string(solved.y(3));
    return t;
}

template <class R>
void reconstruction(Tally& t, const Weight<R>& w, const std::string& name)
{
    ExactMoments<R> mu(w);
    auto st = build_state_from_moments<R>(mu, 6);
    for (int n = 0; n <= 6; ++n)
        t.expect(is_zero(reconstruct_In(st, n) - toeplitz_det<R>(mu, n, 0)), at(name, n));
}

Tally determinant_identity()
{
    Tally t;
    reconstruction(t, binomial_weight(rat(1, 3), 2, 1), "Case 1 binomial");
    reconstruction(t, word_weight(10, 2), "Case 2 word");
    reconstruction(t, generic_case3(10), "Case 3 exponential");
    return t;
}

Tally lattice_flows()
{
    Tally t;
    auto rep = check_flow_identities(rational_weight({rat(1, 2)}, {rat(-1, 3)}), 8, 7);
    for (const auto& c : rep.checks)
        if (c.name.rfind("d x_n", 0) == 0 || c.name.rfind("d y_n", 0) == 0)
            t.expect(c.ok, c.name + " n = " + std::to_string(c.n));

    // x_0 = 1 and x_n = 0 otherwise is the state of e^{u(z + 1/z)} at u = 0.
    FlowState<double> s;
    s.x.assign(25, 0.0);
    s.y.assign(25, 0.0);
    s.x[0] = s.y[0] = 1;
    s.weight.u_plus = {0.0};
    s.weight.u_minus = {0.0};
    auto exact = build_state(symmetric_exponential(40), 5);
    auto error_at = [&](double T, int steps) {
        auto e = rk4_integrate(s, Flow::t_selfdual, T / steps, steps);
        double worst = 0;
        for (int n = 1; n <= 4; ++n)
            worst = std::max(worst, std::abs(e.x[n] - exact.x[n].evaluate(T)));
        return worst;
    };
    double err = error_at(0.1, 100);
    t.expect(err < 1e-8, "RK4 against the series at t = 0.1");
    double ratio = error_at(0.1, 4) / error_at(0.1, 8);
    t.expect(ratio >= 12.8 && ratio <= 19.2, "step-halving ratio");
    std::ostringstream os;
    os << "t = 0.1 error " << err << ", halving ratio " << ratio;
    t.note = os.str();
    return t;
}

Tally invariant_manifold()
{
    Tally t;
    double worst = 0;
    auto w = numeric_weight({rat(1, 2)}, {rat(1, 3)});
    for (Flow f : {Flow::t1, Flow::s1}) {
        auto rep = gamma_evolution_check(w, f, 2, 5, 1e-3, 1000, 1e-8, 1e-4, 1e-7);
        merge(t, rep, flow_name(f) + ": ");
        worst = std::max(worst, rep.max_residual);
    }
    auto sd = numeric_weight({rat(1, 2)}, {rat(1, 2)});
    auto rep = gamma_evolution_check(sd, Flow::t_selfdual, 2, 5, 1e-3, 1000, 1e-8, 1e-4, 1e-7);
    merge(t, rep, "self-dual: ");
    worst = std::max(worst, rep.max_residual);

    // Random states off the manifold.
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> val(-0.3, 0.3);
    for (int trial = 0; trial < 8; ++trial) {
        FlowState<double> s;
        s.x = {1};
        s.y = {1};
        for (int k = 1; k <= 16; ++k) {
            s.x.push_back(val(rng));
            s.y.push_back(val(rng));
        }
        s.weight.u_plus = {val(rng), val(rng)};
        s.weight.u_minus = {val(rng)};
        for (Flow f : {Flow::t1, Flow::s1})
            merge(t, evolution_law_check(s, f, 2, 6, 1e-4, 1e-7), "off-manifold " + flow_name(f) + ": ");
        FlowState<double> sym = s;
        sym.y = sym.x;
        sym.weight.u_minus = sym.weight.u_plus;
        merge(t, evolution_law_check(sym, Flow::t_selfdual, 2, 6, 1e-4, 1e-7), "off-manifold self-dual: ");
    }
    std::ostringstream os;
    os << "max |G| on the manifold " << worst;
    t.note = os.str();
    return t;
}

Tally virasoro()
{
    Tally t;
    auto rep = virasoro_residual_suite({-2, -1, 0, 1, 2}, 3, 2, 8);
    for (const auto& r : rep.residuals)
        t.expect(r.residual.empty(), "k = " + std::to_string(r.k) + " n = " + std::to_string(r.n) +
                                         " gamma = " + std::to_string(r.gamma));
    t.expect(rep.safe_order >= 7, "safe order reaches 7");
    t.expect(rep.passed, "suite verdict");
    std::mt19937_64 rng(110);
    for (Rational beta : {rat(1, 2), Rational(1)})
        for (int k = -2; k <= 2; ++k)
            for (int l = -2; l <= 2; ++l) {
                auto c = commutator_check(k, l, beta, 20, rng);
                for (const auto& e : c.entries)
                    t.expect(e.ok, e.relation + " beta = " + beta.get_str() + " k = " + std::to_string(k) +
                                       " l = " + std::to_string(l));
            }
    return t;
}

Tally lemmas()
{
    Tally t;
    Weight<Rational> b = rational_weight({rat(1, 3), rat(1, 4)}, {rat(-1, 2)});
    b.d1 = 2;
    b.gp1 = 1;
    b.gpp1 = 1;
    auto rep = check_flow_identities(b, 8, 7);
    for (const auto& c : rep.checks)
        if (c.name.rfind("d x_n", 0) != 0 && c.name.rfind("d y_n", 0) != 0)
            t.expect(c.ok, c.name + " n = " + std::to_string(c.n));
    return t;
}

Tally confinement()
{
    Tally t;
    Rational tv = rat(1, 2);
    Weight<Rational> w = rational_weight({tv}, {tv});
    for (int n : {3, 4, 5, 6})
        for (int sign : {1, -1}) {
            std::string tag = "n = " + std::to_string(n) + " sign " + std::to_string(sign) + ": ";
            auto rep = confinement_probe(w, n, sign, {rat(2, 7)}, 12, 4);
            t.expect(rep.indices.back() == n + 4, tag + "probe reaches x_{n+4}");
            t.expect(rep.valuations[0] == 0, tag + "x_{n-1} finite");
            t.expect(rep.valuations[1] == -1, tag + "x_n has a simple pole");
            t.expect(rep.valuations[2] == 0, tag + "x_{n+1} finite and nonzero");
            t.expect(rep.after_constant == -sign, tag + "x_{n+1} constant term");
            t.expect(rep.blowup_leading == Rational(n - 1) / (2 * tv), tag + "leading coefficient (n-1)/(2t)");
            for (size_t k = 3; k < rep.valuations.size(); ++k)
                t.expect(rep.valuations[k] >= 0, tag + "finite after the pole");
        }
    return t;
}

template <class R>
void biorthogonality(Tally& t, const Weight<R>& w, const std::string& name)
{
    ExactMoments<R> mu(w);
    auto st = build_state_from_moments<R>(mu, 5);
    std::vector<std::vector<R>> p1, p2;
    for (int n = 0; n <= 4; ++n) {
        p1.push_back(biorthogonal_poly<R>(mu, n, 1));
        p2.push_back(biorthogonal_poly<R>(mu, n, 2));
        t.expect(is_zero(p1[n][0] - st.x[n]), at(name + " constant term x_n", n));
        t.expect(is_zero(p2[n][0] - st.y[n]), at(name + " constant term y_n", n));
    }
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            R expect = n == m ? st.h[n] : lift<R>(0);
            t.expect(is_zero(inner_product<R>(mu, p1[n], p2[m]) - expect),
                     name + " <p_" + std::to_string(n) + ", p_" + std::to_string(m) + ">");
        }
}

Tally biorthogonal()
{
    Tally t;
    biorthogonality(t, symmetric_exponential(9), "symmetric exponential");
    biorthogonality(t, generic_weight(9), "mixed weight");
    biorthogonality(t, binomial_weight(rat(1, 3), 2, 1), "binomial");
    return t;
}

struct Criterion {
    const char* name;
    std::function<Tally()> run;
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> all = {
        {"LIS generating identity for permutations", gessel},
        {"three-step self-dual relation and forward solver", three_step},
        {"five-step relation and orbit invariants", five_step},
        {"Case 1 relations and their constant", case1},
        {"Case 2 word weight relations", case2},
        {"Case 3 pair and duality", case3},
        {"exact forward solve of the binomial weight", binomial_solver},
        {"determinant reconstruction from x_n y_n", determinant_identity},
        {"lattice flows and RK4 integration", lattice_flows},
        {"invariant manifold and evolution laws", invariant_manifold},
        {"Virasoro constraints and commutators", virasoro},
        {"diagonal derivative lemmas and ladder", lemmas},
        {"singularity confinement", confinement},
        {"biorthogonal polynomials", biorthogonal},
    };
    return all;
}

} // namespace

std::string acceptance_name(int id)
{
    if (id < 1 || id > acceptance_count)
        throw ContractViolation("acceptance criteria are numbered 1.." + std::to_string(acceptance_count));
    return criteria()[id - 1].name;
}

AcceptanceResult run_criterion(int id)
{
    AcceptanceResult r;
    r.id = id;
    r.name = acceptance_name(id);
    auto start = std::chrono::steady_clock::now();
    try {
        Tally t = criteria()[id - 1].run();
        r.passed = t.passed();
        r.detail = t.summary();
    } catch (const Error& e) {
        r.passed = false;
        r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<AcceptanceResult> run_acceptance(const std::vector<int>& ids)
{
    std::vector<AcceptanceResult> out;
    if (ids.empty()) {
        for (int id = 1; id <= acceptance_count; ++id)
            out.push_back(run_criterion(id));
    } else {
        for (int id : ids)
            out.push_back(run_criterion(id));
    }
    return out;
}

} // namespace toeplab
