#include "test_support.hpp"

#include "toeplab/errors.hpp"
#include "toeplab/ring.hpp"

#include "doctest.h"

using namespace toeplab;
using testing_support::random_graded;
using testing_support::random_rational;
using testing_support::random_series;
using testing_support::series_of;

namespace {

// Untruncated convolution of coefficient lists, cut at the order afterwards.
Series naive_product(const Series& a, const Series& b, int order)
{
    std::vector<Rational> r(2 * order + 2);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; j <= order; ++j)
            r[i + j] += a.coeff(i) * b.coeff(j);
    r.resize(order + 1);
    return Series(r, order);
}

Series exp_t(int order, int sign)
{
    std::vector<Rational> c;
    for (int k = 0; k <= order; ++k)
        c.push_back((k % 2 && sign < 0 ? -1 : 1) / factorial(k));
    return Series(c, order);
}

} // namespace

TEST_CASE("rational parsing and formatting")
{
    CHECK(parse_rational("6/4") == rat(3, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(format_rational(parse_rational("-10/4")) == "-5/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK(binomial(-2, 3) == -4);
    CHECK(binomial(5, 2) == 10);
}

TEST_CASE("series multiplication")
{
    Series a = series_of({1, 1}, 6);
    Series b = series_of({1, -1}, 6);
    CHECK(a * b == series_of({1, 0, -1}, 6));
    CHECK(a * Series(1) == a);
    CHECK(exp_t(10, 1) * exp_t(10, -1) == Series({1}, 10));
    CHECK_THROWS_AS(series_mul(Series({1, 1}, 4), Series({1, 1}, 5)), ContractViolation);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        Series x = random_series(rng, 7);
        Series y = random_series(rng, 7);
        CHECK(series_mul(x, y) == naive_product(x, y, 7));
    }
}

TEST_CASE("series ring axioms on random inputs")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        Series a = random_series(rng, 8), b = random_series(rng, 8), c = random_series(rng, 8);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
        CHECK(a - a == Series(std::vector<Rational>{}, 8));
    }
}

TEST_CASE("series inverse")
{
    Series geo = series_inv(series_of({1, -1}, 6));
    for (int k = 0; k <= 6; ++k)
        CHECK(geo.coeff(k) == 1);
    CHECK(series_inv(Series(1)) == Series(1));
    Series q = series_inv(series_of({1, 0, 1, 0, rat(1, 4)}, 5));
    CHECK(q == series_of({1, 0, -1, 0, rat(3, 4)}, 5));
    CHECK_THROWS_AS(series_inv(series_of({0, 1}, 4)), NotInvertible);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Series a = random_series(rng, 9, true);
        Series ai = series_inv(a);
        CHECK(a * ai == Series({1}, 9));
        CHECK(ai * a == Series({1}, 9));
    }
}

TEST_CASE("series exp and log")
{
    CHECK(series_exp(Series::variable(8)) == exp_t(8, 1));
    CHECK(series_exp(Series(std::vector<Rational>{}, 5)) == Series({1}, 5));
    Series lg = series_log(series_of({1, 1}, 7));
    for (int k = 1; k <= 7; ++k)
        CHECK(lg.coeff(k) == Rational(k % 2 ? 1 : -1, k));
    CHECK_THROWS_AS(series_exp(series_of({1, 1}, 4)), DomainError);
    CHECK_THROWS_AS(series_log(series_of({2, 1}, 4)), DomainError);

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 15; ++trial) {
        Series a = random_series(rng, 8);
        a -= Series(a.coeff(0));
        CHECK(series_log(series_exp(a)) == a);
        Series b = a + Series(1);
        CHECK(series_exp(series_log(b)) == b);
    }
}

TEST_CASE("elementary schur polynomials")
{
    std::vector<Rational> t = {rat(2, 3), rat(-1, 5), rat(7, 2)};
    CHECK(schur_p(t, 0) == 1);
    CHECK(schur_p(t, 1) == t[0]);
    CHECK(schur_p(t, 2) == t[0] * t[0] / 2 + t[1]);
    CHECK(schur_p(t, -1) == 0);

    // Generating identity: exp(sum t_i z^i) as a series in z.
    int order = 9;
    std::vector<Rational> c(order + 1);
    for (size_t i = 0; i < t.size(); ++i)
        c[i + 1] = t[i];
    Series gen = series_exp(Series(c, order));
    auto table = schur_table(t, order);
    for (int k = 0; k <= order; ++k)
        CHECK(table[k] == gen.coeff(k));
}

TEST_CASE("laurent inverse")
{
    CHECK(laurent_inv(LaurentEps::monomial(1)) == LaurentEps::monomial(-1));
    LaurentEps a(1, {2, 1}, 4);
    LaurentEps ai = laurent_inv(a);
    CHECK(ai.valuation() == -1);
    CHECK(ai.coeff(-1) == rat(1, 2));
    CHECK(ai.coeff(0) == rat(-1, 4));
    CHECK(ai.precision() == 2);
    LaurentEps g = laurent_inv(LaurentEps(0, {1, 1}, 6));
    for (int k = 0; k < 6; ++k)
        CHECK(g.coeff(k) == (k % 2 ? -1 : 1));
    CHECK_THROWS_AS(laurent_inv(LaurentEps()), NotInvertible);
    CHECK_THROWS_AS(laurent_inv(LaurentEps(0, {1, 1})), ContractViolation);

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> c(6);
        for (auto& x : c)
            x = random_rational(rng);
        if (c[0] == 0)
            c[0] = 3;
        int low = static_cast<int>(rng() % 5) - 2;
        LaurentEps x(low, c, low + 6);
        LaurentEps xi = laurent_inv(x);
        CHECK(xi.valuation() == -low);
        LaurentEps one = x * xi;
        CHECK(one.coeff(0) == 1);
        for (int k = 1; k < one.precision(); ++k)
            CHECK(one.coeff(k) == 0);
    }
}

TEST_CASE("laurent multiplication adds lowest exponents")
{
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        Rational ca = random_rational(rng), cb = random_rational(rng);
        if (ca == 0 || cb == 0)
            continue;
        int la = static_cast<int>(rng() % 7) - 3, lb = static_cast<int>(rng() % 7) - 3;
        LaurentEps a(la, {ca, random_rational(rng)}, la + 5);
        LaurentEps b(lb, {cb, random_rational(rng), random_rational(rng)}, lb + 5);
        LaurentEps p = a * b;
        CHECK(p.valuation() == la + lb);
        CHECK(p.leading() == ca * cb);
        CHECK(p.precision() == la + lb + 5);
    }
}

TEST_CASE("graded polynomial ring axioms and truncation")
{
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"t1", "t2", "s1"}, std::vector<int>{1, 2, 1});
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        GradedPoly a = random_graded(rng, vars, 7, 6);
        GradedPoly b = random_graded(rng, vars, 7, 6);
        GradedPoly c = random_graded(rng, vars, 7, 6);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a.max_degree() <= 7);
        CHECK((a * b).max_degree() <= 7);
    }
    GradedPoly t2 = GradedPoly::variable(vars, 5, 1);
    CHECK((t2 * t2 * t2).is_zero());
    CHECK((t2 * t2).term_count() == 1);
}

TEST_CASE("graded differentiation then integration restores positive-degree terms")
{
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"t1", "t2", "s1", "s2"},
                                         std::vector<int>{1, 2, 1, 2});
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 20; ++trial) {
        GradedPoly f = random_graded(rng, vars, 9, 8);
        for (int idx = 0; idx < vars->size(); ++idx) {
            GradedPoly back = f.derivative(idx).integral(idx);
            // Terms free of the variable are the "constant of integration".
            GradedPoly free(vars, 9);
            for (const auto& [k, c] : f.terms())
                if (f.exponents(k)[idx] == 0)
                    free += GradedPoly::monomial(vars, 9, f.exponents(k), c);
            CHECK(back + free == f);
        }
    }
}

TEST_CASE("graded inverse")
{
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"t", "s"}, std::vector<int>{1, 1});
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        GradedPoly f = random_graded(rng, vars, 6, 5) + GradedPoly::constant(vars, 6, 2);
        if (f.constant_term() == 0)
            continue;
        CHECK(f * graded_inv(f) == GradedPoly::constant(vars, 6, 1));
    }
    CHECK_THROWS_AS(graded_inv(GradedPoly::variable(vars, 4, 0)), NotInvertible);
}
