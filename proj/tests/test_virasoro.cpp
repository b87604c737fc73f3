#include "test_support.hpp"

#include "toeplab/virasoro.hpp"

#include "doctest.h"

using namespace toeplab;
using testing_support::random_rational;

namespace {

Rational factorial(int m)
{
    Rational r = 1;
    for (int i = 2; i <= m; ++i)
        r *= i;
    return r;
}

// [z^p] exp(t z - s / z) for one pair of times, by the double sum over powers.
GradedPoly coefficient_oracle(const TimeRing& ring, int p)
{
    GradedPoly r(ring.vars, ring.order);
    for (int a = 0; a <= ring.order; ++a) {
        int b = a - p;
        if (b < 0 || a + b > ring.order)
            continue;
        std::vector<int> e(ring.vars->size(), 0);
        e[ring.t(1)] = a;
        e[ring.s(1)] = b;
        Rational c = (b % 2 ? -1 : 1) / (factorial(a) * factorial(b));
        r += GradedPoly::monomial(ring.vars, ring.order, e, c);
    }
    return r;
}

GradedPoly random_times_poly(std::mt19937_64& rng, const TimeRing& ring, int reach)
{
    std::uniform_int_distribution<int> ex(0, 2);
    GradedPoly f(ring.vars, unbounded);
    for (int term = 0; term < 5; ++term) {
        std::vector<int> e(ring.vars->size(), 0);
        for (int i = 1; i <= reach; ++i) {
            e[ring.t(i)] = ex(rng);
            e[ring.s(i)] = ex(rng);
        }
        f += GradedPoly::monomial(ring.vars, unbounded, e, random_rational(rng));
    }
    return f;
}

} // namespace

TEST_CASE("tau multiseries against coefficient extraction")
{
    TimeRing ring = time_ring(1, 8);
    CHECK(tau_multiseries(ring, 0, 0) == GradedPoly::constant(ring.vars, 8, 1));
    CHECK(tau_multiseries(ring, 0, 1) == coefficient_oracle(ring, 0));
    CHECK(tau_multiseries(ring, 1, 1) == coefficient_oracle(ring, -1));
    CHECK(tau_multiseries(ring, 1, 1).coeff({2, 3}) == rat(-1, 12));
    CHECK(tau_multiseries(ring, 1, 1).coeff({3, 2}) == 0);

    // det [[mu_0, mu_-1], [mu_1, mu_0]] with mu_k = [z^-k] z^gamma rho.
    for (int gamma : {-1, 0, 2}) {
        auto mu = [&](int k) { return coefficient_oracle(ring, -k - gamma); };
        GradedPoly expect = mu(0) * mu(0) - mu(-1) * mu(1);
        CHECK(tau_multiseries(ring, gamma, 2) == expect);
    }

    Weight<Rational> w;
    w.gamma = 1;
    CHECK(tau_multiseries(ring, w, 1) == tau_multiseries(ring, 1, 1));
    w.u_plus = {1};
    CHECK_THROWS_AS(tau_multiseries(ring, w, 1), ContractViolation);
}

TEST_CASE("constraints on small cases")
{
    TimeRing ring = time_ring(1, 8);
    GradedPoly tau1 = tau_multiseries(ring, 0, 1);
    CHECK(apply_virasoro({0, 0, 1, 0}, ring, tau1).is_zero());
    CHECK(apply_virasoro({0, 0, 0, 0}, ring, GradedPoly(1)).is_zero());
    CHECK(apply_virasoro({0, 0, 1, 0}, ring, tau1).order() == 7);
    CHECK_THROWS_AS(apply_virasoro({-1, 0, 1, 1}, ring, tau1), ContractViolation);
    CHECK_THROWS_AS(apply_virasoro({1, 0, 1, rat(1, 2)}, ring, tau1), ContractViolation);
    // A nonzero residual is reported as such.
    CHECK_FALSE(apply_virasoro({-1, 1, 1, 0}, ring, tau_multiseries(ring, 0, 1)).is_zero());
}

TEST_CASE("annihilation of tau_n")
{
    auto rep = virasoro_residual_suite({-2, -1, 0, 1, 2}, 3, 2, 7);
    CHECK(rep.K_live == 7);
    CHECK(rep.safe_order == 6);
    CHECK(rep.residuals.size() == 5 * 4 * 3);
    for (const auto& r : rep.residuals) {
        INFO("k = " << r.k << " n = " << r.n << " gamma = " << r.gamma << " " << r.residual);
        CHECK(r.nonzero_terms == 0);
        CHECK(r.residual.empty());
    }
    CHECK(rep.passed);

    // With only K times per family the sums reach outside the ring and the
    // residual is known only below the safe order.
    TimeRing narrow = time_ring(2, 8);
    GradedPoly tau = tau_multiseries(narrow, 0, 2);
    CHECK(apply_virasoro({-1, 0, 2, 0}, narrow, tau).order() < 7);
    CHECK(apply_virasoro({0, 0, 2, 0}, narrow, tau).order() == 7);
}

TEST_CASE("inadmissible pairs fail already on tau_0")
{
    TimeRing ring = time_ring(2, 6);
    GradedPoly one = GradedPoly::constant(ring.vars, 6, 1);
    for (int gamma : {0, 2}) {
        CHECK(apply_virasoro_from_currents({-1, gamma, 0, 0}, ring, one).is_zero());
        CHECK(apply_virasoro_from_currents({0, gamma, 0, rat(1, 3)}, ring, one).is_zero());
        CHECK(apply_virasoro_from_currents({1, gamma, 0, 1}, ring, one).is_zero());
        CHECK_FALSE(apply_virasoro_from_currents({-1, gamma, 0, 1}, ring, one).is_zero());
        CHECK_FALSE(apply_virasoro_from_currents({1, gamma, 0, 0}, ring, one).is_zero());
    }
}

TEST_CASE("explicit constraints agree with the current expansion")
{
    std::mt19937_64 rng(11);
    TimeRing ring = time_ring(5, 1);
    const std::pair<int, Rational> pairs[] = {{-1, 0}, {0, 0}, {0, rat(2, 3)}, {0, -3}, {1, 1}};
    for (int trial = 0; trial < 10; ++trial) {
        GradedPoly f = random_times_poly(rng, ring, 3);
        for (int n = 0; n <= 3; ++n)
            for (int gamma = -2; gamma <= 2; ++gamma)
                for (const auto& [k, theta] : pairs) {
                    VirasoroOp op{k, gamma, n, theta};
                    CHECK(apply_virasoro(op, ring, f) == apply_virasoro_from_currents(op, ring, f));
                }
    }
}

TEST_CASE("heisenberg operators and commutators")
{
    TimeRing ring = time_ring(8, 1);
    std::vector<int> sq(ring.vars->size(), 0);
    sq[ring.t(1)] = 2;
    GradedPoly t1sq = GradedPoly::monomial(ring.vars, unbounded, sq, 1);
    auto J = [&](int k, int order, const Rational& beta, const GradedPoly& f) -> GradedPoly {
        return heisenberg_apply({k, order, beta, 0, TimeFamily::t}, ring, f);
    };
    Rational half = rat(1, 2);
    CHECK(J(1, 1, half, J(-1, 1, half, t1sq)) - J(-1, 1, half, J(1, 1, half, t1sq)) == t1sq);
    CHECK(current_apply(0, 1, half, TimeFamily::t, ring, t1sq).is_zero());
    CHECK(J(1, 2, 1, J(1, 1, 1, t1sq)) - J(1, 1, 1, J(1, 2, 1, t1sq)) == -J(2, 1, 1, t1sq));

    CHECK(central_charge(half) == -2);
    CHECK(central_charge(1) == 1);
    CHECK(central_charge(2) == -2);

    std::mt19937_64 rng(12);
    for (Rational beta : {half, Rational(1), rat(3, 2)})
        for (int k = -2; k <= 2; ++k)
            for (int l = -2; l <= 2; ++l) {
                auto rep = commutator_check(k, l, beta, 4, rng);
                INFO("beta = " << beta.get_str() << " k = " << k << " l = " << l);
                CHECK(rep.entries.size() == 4 * 3 * 3);
                CHECK(rep.passed);
            }
    CHECK_THROWS_AS(commutator_check(3, 0, half, 1, rng), ContractViolation);
}

TEST_CASE("time ring limits")
{
    CHECK_THROWS_AS(time_ring(9, 4), ContractViolation);
    CHECK_THROWS_AS(time_ring(0, 4), ContractViolation);
    CHECK_THROWS_AS(virasoro_residual_suite({0}, 1, 2, 9), ContractViolation);
}
