#include "test_support.hpp"

#include "toeplab/recursion.hpp"

#include "doctest.h"

using namespace toeplab;
using testing_support::random_rational;
using testing_support::rational_weight;
using testing_support::series_weight;

namespace {

Series tvar(int order, const Rational& c = 1) { return Series::variable(order, c); }

Weight<Series> symmetric_exponential(int order) { return series_weight(rational_weight({1}, {1}), order); }

// e^{t(z + 1/z) + s(z^2 + 1/z^2)} along s = sigma t.
Weight<Series> quartic_exponential(int order, const Rational& sigma)
{
    Weight<Series> w;
    w.u_plus = {tvar(order), tvar(order, 2 * sigma)};
    w.u_minus = w.u_plus;
    return w;
}

// (1 + z)^alpha e^{-t/z}.
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

// (1 - d z)^3 (1 - 1/(d z))^2 e^{P1(z) + P2(1/z)}.
Weight<Series> generic_case2(int order, std::vector<Rational> up, std::vector<Rational> um)
{
    Weight<Rational> w = rational_weight(std::move(up), std::move(um));
    w.d1 = rat(-1, 3);
    w.gp1 = 3;
    w.gpp1 = 2;
    return series_weight(w, order);
}

Weight<Series> generic_case3(int order, std::vector<Rational> up, std::vector<Rational> um, int gamma = 0)
{
    return series_weight(rational_weight(std::move(up), std::move(um), gamma), order);
}

template <class R>
void check_all_zero(const RecursionReport<R>& rep)
{
    CHECK(!rep.residuals.empty());
    for (const auto& e : rep.residuals) {
        INFO(e.name << " at n = " << e.n);
        CHECK(is_zero(e.value));
    }
    CHECK(rep.verified);
}

} // namespace

TEST_CASE("three-step self-dual relation")
{
    auto w = symmetric_exponential(14);
    auto s = build_state(w, 8);
    LatticeView<Series> lv(s);
    Series t = tvar(14);
    CHECK(classify_case(w).id == CaseId::self_dual);
    for (int n = 1; n <= 7; ++n) {
        Series display = Series(n) * s.x[n] + t * (Series(1) - s.x[n] * s.x[n]) * (s.x[n + 1] + s.x[n - 1]);
        CHECK(is_zero(display));
        CHECK(is_zero(residual_selfdual(lv, w.u_plus, n)));
        auto g = residual_case3(lv, w, n);
        CHECK(is_zero(g.gamma));
        CHECK(is_zero(g.gamma_tilde));
    }
    check_all_zero(verify_relations(lv, w, classify_case(w)));
}

TEST_CASE("rational and division-free forms coincide off the manifold")
{
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rational> x{1}, y{1}, up, um;
        for (int k = 1; k <= 10; ++k) {
            x.push_back(random_rational(rng));
            y.push_back(random_rational(rng));
        }
        int n1 = 1 + static_cast<int>(rng() % 3), n2 = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n1; ++i)
            up.push_back(random_rational(rng));
        for (int i = 0; i < n2; ++i)
            um.push_back(random_rational(rng));
        Weight<Rational> w = rational_weight(up, um);
        LatticeView<Rational> lv(x, y), sv(x, x);
        for (int n = 1; n <= 4; ++n) {
            if (x[n] == 0 || y[n] == 0)
                continue;
            auto a = residual_case3(lv, w, n);
            auto b = residual_case3_rational(lv, w, n);
            CHECK(a.gamma == b.gamma);
            CHECK(a.gamma_tilde == b.gamma_tilde);
            CHECK(residual_selfdual(sv, up, n) == residual_selfdual_rational(sv, up, n));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("singular variables in the rational forms")
{
    // Symmetric exponential with zero exponents: every x_n = 0 for n >= 1.
    Weight<Rational> w = rational_weight({0}, {0});
    auto s = build_state(w, 4);
    LatticeView<Rational> lv(s);
    CHECK_THROWS_AS(residual_case3_rational(lv, w, 1), SingularVariable);
    CHECK_THROWS_AS(residual_selfdual_rational(lv, w.u_plus, 1), SingularVariable);
}

TEST_CASE("five-step self-dual relation")
{
    Rational sv = rat(1, 3);
    auto w = quartic_exponential(14, sv);
    auto st = build_state(w, 9);
    LatticeView<Series> lv(st);
    Series t = tvar(14), s = tvar(14, sv);
    const auto& x = st.x;
    const auto& v = st.v;
    for (int n = 2; n <= 6; ++n) {
        Series display = Series(n) * x[n] + t * v[n] * (x[n - 1] + x[n + 1]) +
                         Series(2) * s * v[n] *
                             (x[n + 2] * v[n + 1] + x[n - 2] * v[n - 1] -
                              x[n] * (x[n + 1] + x[n - 1]) * (x[n + 1] + x[n - 1]));
        CHECK(is_zero(display));
    }
    for (int n = 1; n <= 6; ++n)
        CHECK(is_zero(residual_selfdual(lv, w.u_plus, n)));
    check_all_zero(verify_relations(lv, w, classify_case(w)));
}

TEST_CASE("relations of the word weight")
{
    for (int alpha : {1, 2}) {
        auto w = word_weight(10, alpha);
        auto st = build_state(w, 8);
        LatticeView<Series> lv(st);
        CaseTag tag = classify_case(w);
        CHECK(tag.id == CaseId::case2);
        CHECK(tag.abc == Abc{0, 1, 1});
        const auto& x = st.x;
        const auto& y = st.y;
        const auto& v = st.v;
        Series s = tvar(10);
        for (int n = 1; n <= 5; ++n) {
            Series three = -Series(n + alpha + 1) * x[n + 1] * y[n] - s * x[n] * y[n + 1] +
                           Series(n + alpha - 1) * x[n] * y[n - 1] + s * x[n - 1] * y[n];
            CHECK(is_zero(three));
        }
        Series rhs = v[1] * (s - Series(2 + alpha) * x[2]) + x[1] * (x[1] - Series(1));
        for (int n = 2; n <= 5; ++n) {
            Series four = -v[n] * (Series(n + alpha + 1) * x[n + 1] * y[n - 1] - s) +
                          v[n - 1] * (Series(n + alpha - 2) * x[n] * y[n - 2] - s) +
                          x[n] * y[n - 1] * (x[n] * y[n - 1] - Series(1));
            CHECK(is_zero(four - rhs));
        }
        for (const Abc& abc : {Abc{0, 1, 1}, Abc{1, 1, 0}}) {
            CHECK(admissible_abc(w, abc));
            CaseTag t2 = tag;
            t2.abc = abc;
            check_all_zero(verify_relations(lv, w, t2));
            // The constant of the second relation read at several indices.
            Series C = case12_constant(lv, w, abc, 1);
            for (int m = 2; m <= 4; ++m)
                CHECK(is_zero(case12_constant(lv, w, abc, m) - C));
        }
        // The first relation with the script matrices of the displayed reduction.
        for (int n = 1; n <= 5; ++n) {
            Series lhs = Series(n + 1 + alpha) * lv.entry(1, n + 1, n + 1) + s * lv.entry(2, n + 1, n + 1) -
                         Series(n + alpha) * lv.entry(1, n, n) - s * lv.entry(2, n, n) + lv.entry(1, n, n);
            CHECK(is_zero(lhs));
        }
    }
}

TEST_CASE("relations of the binomial weight")
{
    Rational xi = rat(1, 3);
    int alpha = 2, beta = 1;
    auto w = binomial_weight(xi, alpha, beta);
    auto st = build_state(w, 9);
    LatticeView<Rational> lv(st);
    CaseTag tag = classify_case(w);
    CHECK(tag.id == CaseId::case1);
    CHECK(tag.abc == Abc{1, -xi - 1 / xi, 1});
    // Script matrices come out as (n + alpha) L1 and (n + beta) L2.
    CHECK(script_matrix(w, tag.abc, 1, 4).coeffs[1] == 4 + alpha);
    CHECK(script_matrix(w, tag.abc, 2, 4).coeffs[1] == 4 + beta);
    const auto& x = st.x;
    const auto& y = st.y;
    const auto& v = st.v;
    Rational X = xi + 1 / xi;
    for (int n = 1; n <= 6; ++n) {
        Rational three = -(n + alpha + 1) * x[n + 1] * y[n] + (n + beta + 1) * y[n + 1] * x[n] +
                         (n + alpha - 1) * y[n - 1] * x[n] - (n + beta - 1) * x[n - 1] * y[n];
        CHECK(three == 0);
    }
    Rational rhs = -v[1] * (x[2] * (alpha + 2) + beta + 1) + x[1] * (x[1] + X);
    for (int n = 2; n <= 6; ++n) {
        Rational four = -v[n] * ((n + alpha + 1) * x[n + 1] * y[n - 1] + n + beta) +
                        v[n - 1] * ((n + alpha - 2) * x[n] * y[n - 2] + n + beta - 1) +
                        x[n] * y[n - 1] * (x[n] * y[n - 1] + X);
        CHECK(four == rhs);
    }
    check_all_zero(verify_relations(lv, w, tag));
    CHECK(x[1] == rat(3, 11));
    CHECK(y[1] == rat(19, 33));
}

TEST_CASE("a generic Case 1 weight")
{
    auto w = case1_weight(10);
    auto st = build_state(w, 7);
    LatticeView<Series> lv(st);
    CaseTag tag = classify_case(w);
    CHECK(tag.id == CaseId::case1);
    CHECK(tag.abc == Abc{1, -5, 6});
    check_all_zero(verify_relations(lv, w, tag));
    Series C = case12_constant(lv, w, tag.abc);
    Series Cd = case12_dual_constant(lv, w, tag.abc);
    for (int m = 2; m <= 4; ++m) {
        CHECK(is_zero(case12_constant(lv, w, tag.abc, m) - C));
        CHECK(is_zero(case12_dual_constant(lv, w, tag.abc, m) - Cd));
    }
    CHECK(is_zero(residual_case12_second(lv, w, tag.abc, 0)));
}

TEST_CASE("Case 3 pair on generic weights")
{
    std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> shapes = {
        {{rat(1, 2)}, {rat(-1, 3)}},
        {{rat(1, 2)}, {rat(-1, 3), rat(1, 5)}},
        {{rat(1, 2), rat(2, 7)}, {rat(-1, 3)}},
        {{rat(1, 2), rat(2, 7)}, {rat(-1, 3), rat(1, 5)}},
        {{rat(1, 2), 0, rat(1, 4)}, {rat(-1, 3), rat(1, 5)}},
    };
    for (const auto& sh : shapes) {
        auto w = generic_case3(10, sh.first, sh.second);
        auto st = build_state(w, 8);
        LatticeView<Series> lv(st);
        CaseTag tag = classify_case(w);
        CHECK(tag.id == CaseId::case3);
        check_all_zero(verify_relations(lv, w, tag));
        // The pair of the dual weight is the swapped pair.
        auto dw = dual_weight(w);
        auto ds = build_state(dw, 8);
        for (int n = 1; n <= 4; ++n) {
            auto g = residual_case3(lv.swapped(), dw, n);
            CHECK(is_zero(g.gamma));
            CHECK(is_zero(g.gamma_tilde));
            CHECK(is_zero(ds.x[n] - st.y[n]));
        }
    }
}

TEST_CASE("Case 3 pair on random off-manifold states")
{
    // Under x <-> y with the dual weight the pair swaps.
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> x{1}, y{1}, up, um;
        for (int k = 1; k <= 10; ++k) {
            x.push_back(random_rational(rng));
            y.push_back(random_rational(rng));
        }
        int n1 = 1 + static_cast<int>(rng() % 3), n2 = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n1; ++i)
            up.push_back(random_rational(rng));
        for (int i = 0; i < n2; ++i)
            um.push_back(random_rational(rng));
        Weight<Rational> w = rational_weight(up, um);
        LatticeView<Rational> lv(x, y);
        for (int n = 1; n <= 4; ++n) {
            auto g = residual_case3(lv, w, n);
            auto d = residual_case3(lv.swapped(), dual_weight(w), n);
            CHECK(g.gamma == d.gamma_tilde);
            CHECK(g.gamma_tilde == d.gamma);
        }
        // The self-dual relation is the Case 3 pair on a symmetric view.
        LatticeView<Rational> sv(x, x);
        Weight<Rational> sw = rational_weight(up, up);
        for (int n = 1; n <= 4; ++n) {
            auto g = residual_case3(sv, sw, n);
            CHECK(g.gamma == residual_selfdual(sv, up, n));
            CHECK(g.gamma_tilde == g.gamma);
        }
    }
}

TEST_CASE("case table")
{
    CHECK(first_solvable_index(CaseId::case1, 0, 0) == 3);
    CHECK(first_solvable_index(CaseId::self_dual, 1, 1) == 2);
    CHECK(first_solvable_index(CaseId::self_dual, 2, 2) == 3);
    CHECK(first_solvable_index(CaseId::case3, 1, 2) == 3);
    CHECK(first_solvable_index(CaseId::case2, 0, 1) == 3);
    CHECK(relations_for_target(CaseId::case3, 1, 3, 5).empty());
    CHECK(relations_for_target(CaseId::case1, 0, 2, 5).empty());
    CHECK_THROWS_AS(first_solvable_index(CaseId::case3, 0, 2), UnsolvableStep);
    auto u = relations_for_target(CaseId::case2, 2, 1, 7);
    REQUIRE(u.size() == 2);
    CHECK(u[0].kind == RelationKind::first);
    CHECK(u[0].n == 5);
    CHECK(u[1].kind == RelationKind::dual_second);
    CHECK(u[1].n == 4);
}

TEST_CASE("forward solver reproduces the symmetric exponential states")
{
    int order = 24;
    auto w = symmetric_exponential(order);
    auto st = build_state(w, 10);
    CaseTag tag = classify_case(w);
    int first = first_solvable_index(tag.id, w.N1(), w.N2());
    auto solved = solve_forward(seed_view(st, first), w, tag, 10);
    REQUIRE(solved.max_index() == 10);
    CHECK(solved.x(10).order() >= 12);
    auto deltas = check_consistency(solved, st);
    CHECK(deltas.size() == 11);
    // x_2 = t^2 / 2 + O(t^4).
    CHECK(solved.x(2).coeff(2) == rat(1, 2));
    CHECK(solved.x(2).coeff(3) == 0);
}

TEST_CASE("forward solver on the binomial weight is exact")
{
    auto w = binomial_weight(rat(1, 3), 2, 1);
    auto st = build_state(w, 9);
    CaseTag tag = classify_case(w);
    auto solved = solve_forward(seed_view(st, 3), w, tag, 9);
    for (int n = 0; n <= 9; ++n) {
        CHECK(solved.x(n) == st.x[n]);
        CHECK(solved.y(n) == st.y[n]);
    }
    // Wrong seeds are caught by the consistency check.
    // The word weight stalls once n reaches the alphabet size.
    auto ww = word_weight(12, 1);
    auto ws = build_state(ww, 6);
    CHECK_THROWS_AS(solve_forward(seed_view(ws, 3), ww, classify_case(ww), 6), UnsolvableStep);
    auto bad = seed_view(st, 3);
    bad.assign(2, st.x[2] + 1, st.y[2]);
    try {
        auto off = solve_forward(bad, w, tag, 6);
        CHECK_THROWS_AS(check_consistency(off, st), ConsistencyFailure);
    } catch (const UnsolvableStep&) {
    }
}

TEST_CASE("forward solver across the case table")
{
    std::vector<Weight<Series>> ws = {
        generic_case2(16, {}, {-1}),
        generic_case2(16, {rat(1, 2)}, {-1}),
        generic_case2(16, {rat(1, 2), rat(1, 3)}, {-1}),
        case1_weight(16),
        generic_case3(16, {rat(1, 2)}, {rat(-1, 3)}),
        generic_case3(16, {rat(1, 2)}, {rat(-1, 3), rat(1, 5)}),
        generic_case3(16, {rat(1, 2), rat(2, 7)}, {rat(-1, 3)}),
        quartic_exponential(24, rat(1, 3)),
    };
    for (const auto& w : ws) {
        CaseTag tag = classify_case(w);
        INFO(case_name(tag.id) << " N1 = " << w.N1() << " N2 = " << w.N2());
        auto st = build_state(w, 8);
        int first = first_solvable_index(tag.id, w.N1(), w.N2());
        auto solved = solve_forward(seed_view(st, first), w, tag, 8);
        CHECK(solved.max_index() == 8);
        CHECK_NOTHROW(check_consistency(solved, st));
    }
}

TEST_CASE("forward solver rejects a wide degree gap and short seeds")
{
    auto w = generic_case3(10, {rat(1, 2)}, {rat(-1, 3), 0, rat(1, 5)});
    auto st = build_state(w, 5);
    CaseTag tag = classify_case(w);
    CHECK_THROWS_AS(solve_forward(seed_view(st, 3), w, tag, 5), UnsolvableStep);
    auto sd = symmetric_exponential(10);
    auto s2 = build_state(sd, 5);
    CHECK_THROWS_AS(solve_forward(seed_view(s2, 1), sd, classify_case(sd), 5), ContractViolation);
}

TEST_CASE("three-step invariant along orbits")
{
    auto w = symmetric_exponential(16);
    auto st = build_state(w, 8);
    Series t = tvar(16);
    for (int n = 1; n <= 7; ++n)
        CHECK(is_zero(invariant_shift_3step(n, t, st.x)));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Rational tv = random_rational(rng);
        if (tv == 0)
            tv = 1;
        Weight<Rational> rw = rational_weight({tv}, {tv});
        std::vector<Rational> x{1, random_rational(rng)};
        LatticeView<Rational> seeds(x, x);
        LatticeView<Rational> orbit;
        try {
            orbit = solve_forward(seeds, rw, classify_case(rw), 7);
        } catch (const UnsolvableStep&) {
            continue; // a seed landed on x_n = +-1
        }
        std::vector<Rational> xs;
        for (int k = 0; k <= orbit.max_index(); ++k)
            xs.push_back(orbit.x(k));
        for (int n = 1; n <= 6; ++n)
            CHECK(invariant_shift_3step(n, tv, xs) == 0);
    }
}

TEST_CASE("five-step invariant along orbits")
{
    Rational sv = rat(1, 3);
    auto w = quartic_exponential(16, sv);
    auto st = build_state(w, 9);
    Series t = tvar(16);
    for (int m = 2; m <= 7; ++m)
        CHECK(is_zero(invariant_shift_5step(m, t, tvar(16, sv), st.x)));

    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 10; ++trial) {
        Rational tv = random_rational(rng), s = random_rational(rng);
        if (s == 0)
            s = 1;
        Weight<Rational> rw = rational_weight({tv, 2 * s}, {tv, 2 * s});
        std::vector<Rational> x{1, random_rational(rng), random_rational(rng)};
        LatticeView<Rational> orbit;
        try {
            orbit = solve_forward(LatticeView<Rational>(x, x), rw, classify_case(rw), 8);
        } catch (const UnsolvableStep&) {
            continue;
        }
        std::vector<Rational> xs;
        for (int k = 0; k <= orbit.max_index(); ++k)
            xs.push_back(orbit.x(k));
        for (int m = 3; m <= 6; ++m)
            CHECK(invariant_shift_5step(m, tv, s, xs) == 0);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("singularity confinement")
{
    Rational tv = rat(1, 2);
    Weight<Rational> w = rational_weight({tv}, {tv});
    for (int n : {4, 6})
        for (int sign : {1, -1}) {
            auto rep = confinement_probe(w, n, sign, {rat(2, 7)});
            CHECK(rep.valuations[0] == 0);
            CHECK(rep.valuations[1] == -1);
            CHECK(rep.blowup_leading == Rational(n - 1) / (2 * tv));
            CHECK(rep.after_constant == -sign);
            for (size_t k = 2; k < rep.valuations.size(); ++k)
                CHECK(rep.valuations[k] >= 0);
        }
    Weight<Rational> w5 = rational_weight({tv, rat(2, 3)}, {tv, rat(2, 3)});
    auto rep = confinement_probe(w5, 7, 1, {rat(1, 5), rat(-2, 7), rat(3, 11)});
    CHECK(rep.valuations[1] == -1);
    CHECK(rep.after_constant == -1);
    CHECK_THROWS_AS(confinement_probe(w, 2, 1, {rat(1, 3)}), ContractViolation);
    CHECK_THROWS_AS(confinement_probe(w, 5, 1, {rat(1, 3), rat(1, 2)}), ContractViolation);
}

TEST_CASE("written-out forms of the Case 1 and 2 relations")
{
    // With the script matrices held at index n throughout,
    //   (S1 - S2 + a L2 - c L1)_{nn} - (S1 - S2 - a L2 + c L1)_{n+1,n+1} = -first_n,
    //   2 B_{n+1} - B_n - B_{n+2} + a (v_{n+1} - v_{n-1}) + b (x_{n+1} y_n - x_n y_{n-1})
    //     + c (2 y_n x_{n+2} v_{n+1} - 2 x_n y_{n-2} v_{n-1} + x_n^2 y_{n-1}^2 - y_n^2 x_{n+1}^2)
    //     = second_{n-1} - second_n,
    // where B_i = (v_{i-1} S1 - S2)_{i,i-1}.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Rational> x{1}, y{1};
        for (int k = 1; k <= 14; ++k) {
            x.push_back(random_rational(rng));
            y.push_back(random_rational(rng));
        }
        LatticeView<Rational> lv(x, y);
        Weight<Rational> w = rational_weight({random_rational(rng), random_rational(rng)}, {random_rational(rng)},
                                             static_cast<int>(rng() % 3) - 1);
        w.gp1 = static_cast<int>(rng() % 3);
        w.gpp2 = static_cast<int>(rng() % 3);
        Abc abc{random_rational(rng), random_rational(rng), random_rational(rng)};
        for (int n = 2; n <= 4; ++n) {
            auto s1 = script_matrix(w, abc, 1, n);
            auto s2 = script_matrix(w, abc, 2, n);
            auto S = [&](int i, int j) -> Rational { return script_entry(lv, s1, i, j) - script_entry(lv, s2, i, j); };
            auto B = [&](int i) -> Rational {
                return lv.v(i - 1) * script_entry(lv, s1, i, i - 1) - script_entry(lv, s2, i, i - 1);
            };
            Rational first = S(n, n) + abc.a * lv.entry(2, n, n) - abc.c * lv.entry(1, n, n) -
                             (S(n + 1, n + 1) - abc.a * lv.entry(2, n + 1, n + 1) + abc.c * lv.entry(1, n + 1, n + 1));
            CHECK(first == -residual_case12_first(lv, w, abc, n));
            Rational second = 2 * B(n + 1) - B(n) - B(n + 2) + abc.a * (lv.v(n + 1) - lv.v(n - 1)) +
                              abc.b * (x[n + 1] * y[n] - x[n] * y[n - 1]) +
                              abc.c * (2 * y[n] * x[n + 2] * lv.v(n + 1) - 2 * x[n] * y[n - 2] * lv.v(n - 1) +
                                       x[n] * x[n] * y[n - 1] * y[n - 1] - y[n] * y[n] * x[n + 1] * x[n + 1]);
            CHECK(second == residual_case12_second(lv, w, abc, n - 1) - residual_case12_second(lv, w, abc, n));
        }
    }
}

TEST_CASE("first relation vanishes identically for symmetric data")
{
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rational> x{1}, u;
        for (int k = 1; k <= 12; ++k)
            x.push_back(random_rational(rng));
        for (int i = 0; i < 1 + static_cast<int>(rng() % 3); ++i)
            u.push_back(random_rational(rng));
        LatticeView<Rational> lv(x, x);
        Weight<Rational> w = rational_weight(u, u);
        for (int n = 1; n <= 4; ++n)
            CHECK(residual_case12_first(lv, w, Abc{0, 1, 0}, n) == 0);
    }
}

TEST_CASE("Case 3 pair over a two-variable graded ring")
{
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"a", "b"}, std::vector<int>{1, 1});
    int order = 8;
    Weight<GradedPoly> w;
    w.u_plus = {GradedPoly::variable(vars, order, 0)};
    w.u_minus = {GradedPoly::variable(vars, order, 1)};
    CHECK(classify_case(w).id == CaseId::case3);
    auto st = build_state(w, 7);
    LatticeView<GradedPoly> lv(st);
    for (int n = 1; n <= 5; ++n) {
        auto g = residual_case3(lv, w, n);
        CHECK(is_zero(g.gamma));
        CHECK(is_zero(g.gamma_tilde));
    }
}

TEST_CASE("binomial weight at xi = 1/2")
{
    auto w = binomial_weight(rat(1, 2), 1, 1);
    auto st = build_state(w, 6);
    LatticeView<Rational> lv(st);
    CaseTag tag = classify_case(w);
    CHECK(residual_case12_first(lv, w, tag.abc, 1) == 0);
    check_all_zero(verify_relations(lv, w, tag));
}

TEST_CASE("zero exponents")
{
    Weight<Series> w = generic_case3(8, {0}, {0});
    auto st = build_state(w, 5);
    LatticeView<Series> lv(st);
    for (int n = 1; n <= 3; ++n) {
        CHECK(is_zero(st.x[n]));
        CHECK(is_zero(residual_gamma(lv, w, n)));
        CHECK(is_zero(residual_selfdual(lv, w.u_plus, n)));
    }
    // A vanishing top exponent stalls the solver.
    Weight<Rational> rw = rational_weight({rat(1, 2), 0}, {rat(1, 2), 0});
    std::vector<Rational> x{1, rat(1, 3), rat(2, 5)};
    CHECK_THROWS_AS(solve_forward(LatticeView<Rational>(x, x), rw, classify_case(rw), 5), UnsolvableStep);
}

TEST_CASE("five-step invariant along a floating-point orbit")
{
    double t = 0.3, s = 0.2;
    Weight<double> w;
    w.u_plus = {t, 2 * s};
    w.u_minus = w.u_plus;
    CaseTag tag;
    tag.id = CaseId::self_dual;
    std::vector<double> x{1, 0.21, -0.13};
    auto orbit = solve_forward(LatticeView<double>(x, x), w, tag, 9);
    std::vector<double> xs;
    for (int k = 0; k <= orbit.max_index(); ++k)
        xs.push_back(orbit.x(k));
    for (int m = 3; m <= 7; ++m)
        CHECK(std::abs(invariant_shift_5step(m, t, s, xs)) < 1e-10);
    CHECK(invariant_phi_3step(4, 0.5, 0.0, 0.0) == 1.0);
}
