#include "test_support.hpp"

#include "toeplab/flows.hpp"

#include "doctest.h"

#include <cmath>

using namespace toeplab;
using testing_support::random_rational;
using testing_support::rational_weight;

namespace {

FlowState<Rational> random_flow_state(std::mt19937_64& rng, int n_max, int support, bool symmetric = false)
{
    FlowState<Rational> s;
    s.x = {1};
    s.y = {1};
    for (int k = 1; k <= n_max; ++k) {
        Rational a = k <= support ? random_rational(rng) : Rational(0);
        Rational b = k <= support ? random_rational(rng) : Rational(0);
        s.x.push_back(a);
        s.y.push_back(symmetric ? a : b);
    }
    return s;
}

WeightSpec numeric_weight(std::vector<Rational> up, std::vector<Rational> um)
{
    WeightSpec w;
    static_cast<Weight<Rational>&>(w) = rational_weight(std::move(up), std::move(um));
    w.mode = Mode::numeric;
    return w;
}

} // namespace

TEST_CASE("first flows read off the field")
{
    std::mt19937_64 rng(1);
    auto s = random_flow_state(rng, 8, 8);
    auto t1 = vector_field(s, Flow::t1);
    auto s1 = vector_field(s, Flow::s1);
    for (int k = 1; k <= 7; ++k) {
        Rational v = 1 - s.x[k] * s.y[k];
        CHECK(t1.dx[k] == v * s.x[k + 1]);
        CHECK(t1.dy[k] == -v * s.y[k - 1]);
        CHECK(s1.dx[k] == v * s.x[k - 1]);
        CHECK(s1.dy[k] == -v * s.y[k + 1]);
    }
    CHECK(t1.dx[0] == 0);
    CHECK(t1.dy[0] == 0);
    CHECK(t1.trusted_max == 7);
    CHECK(vector_field(s, Flow::t2).trusted_max == 6);

    FlowState<Rational> zero{{1, 0, 0, 0}, {1, 0, 0, 0}, {}, 0};
    auto z = vector_field(zero, Flow::t1);
    CHECK(z.dx[1] == 0);
    CHECK(z.dy[1] == -1);
}

TEST_CASE("the involution exchanges the t and s fields")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = random_flow_state(rng, 9, 9);
        FlowState<Rational> sw{s.y, s.x, {}, 0};
        for (auto [ft, fs] : {std::pair{Flow::t1, Flow::s1}, std::pair{Flow::t2, Flow::s2}}) {
            auto a = vector_field(s, fs);
            auto b = vector_field(sw, ft);
            for (int k = 0; k <= b.trusted_max; ++k) {
                CHECK(a.dx[k] == -b.dy[k]);
                CHECK(a.dy[k] == -b.dx[k]);
            }
        }
    }
}

TEST_CASE("hamiltonians: closed forms against traces")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 15; ++trial) {
        auto s = random_flow_state(rng, 12, 6);
        auto lv = s.view();
        for (int i = 1; i <= 2; ++i)
            for (int k = 1; k <= 2; ++k)
                CHECK(hamiltonian(s.x, s.y, i, k) == hamiltonian_trace(lv, i, k, 10));
    }
    FlowState<Rational> zero{{1, 0, 0}, {1, 0, 0}, {}, 0};
    CHECK(hamiltonian(zero.x, zero.y, 1, 1) == 0);
    // Floating point agrees to rounding.
    std::vector<double> x{1, 0.3, -0.2, 0.1, 0, 0, 0}, y{1, -0.4, 0.25, 0.05, 0, 0, 0};
    LatticeView<double> dv(x, y);
    CHECK(std::abs(hamiltonian(x, y, 2, 1) - hamiltonian_trace(dv, 2, 1, 5)) < 1e-12);
    CHECK_THROWS_AS(hamiltonian(x, y, 3, 1), ContractViolation);
}

TEST_CASE("flow identities on determinant states")
{
    Weight<Rational> w = rational_weight({rat(1, 2)}, {rat(-1, 3)});
    auto rep = check_flow_identities(w, 6, 5);
    CHECK(rep.passed);
    CHECK(rep.checks.size() > 100);

    Weight<Rational> b = rational_weight({rat(1, 3), rat(1, 4)}, {});
    b.d1 = 2;
    b.gp1 = 1;
    b.gpp1 = 1;
    CHECK(check_flow_identities(b, 5, 4).passed);
}

TEST_CASE("evolution of the Case 3 pair off the manifold")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        auto s = random_flow_state(rng, 14, 14);
        Weight<Rational> w = rational_weight({random_rational(rng), random_rational(rng)}, {random_rational(rng)});
        auto lv = s.view();
        for (Flow f : {Flow::t1, Flow::s1}) {
            auto rep = check_gamma_evolution_exact(lv, w, f, 2, 6);
            for (const auto& c : rep.checks) {
                INFO(c.name << " n = " << c.n << " " << c.detail);
                CHECK(c.ok);
            }
        }
        auto sd = random_flow_state(rng, 14, 14, true);
        std::vector<Rational> u{random_rational(rng), random_rational(rng)};
        auto rep = check_gamma_evolution_exact(sd.view(), rational_weight(u, u), Flow::t_selfdual, 2, 6);
        CHECK(rep.passed);
    }
}

TEST_CASE("integration: conservation, step order and the series solution")
{
    // Determinant seed for e^{u(z + 1/z)} with u = 0: x = y = 0 beyond index 0.
    FlowState<double> s;
    s.x.assign(25, 0.0);
    s.y.assign(25, 0.0);
    s.x[0] = s.y[0] = 1;
    s.weight.u_plus = {0.0};
    s.weight.u_minus = {0.0};
    auto exact = build_state(testing_support::series_weight(rational_weight({1}, {1}), 30), 5);
    auto error_at = [&](double dt, int steps) {
        auto e = rk4_integrate(s, Flow::t_selfdual, dt, steps);
        double worst = 0;
        for (int n = 1; n <= 4; ++n)
            worst = std::max(worst, std::abs(e.x[n] - exact.x[n].evaluate(dt * steps)));
        return worst;
    };
    CHECK(error_at(1e-3, 100) < 1e-8);
    double coarse = error_at(0.05, 2), fine = error_at(0.025, 4);
    double ratio = coarse / fine;
    CHECK(ratio > 12);
    CHECK(ratio < 20);

    auto same = rk4_integrate(s, Flow::t1, 0.0, 5);
    CHECK(same.x == s.x);

    auto seed = numeric_flow_state(numeric_weight({rat(1, 2)}, {rat(1, 3)}), 30);
    double h0 = hamiltonian(seed.x, seed.y, 1, 1);
    auto end = rk4_integrate(seed, Flow::t1, 1e-3, 1000);
    CHECK(std::abs(hamiltonian(end.x, end.y, 1, 1) - h0) < 1e-9);
    CHECK(end.weight.u_plus[0] == doctest::Approx(1.5));
    CHECK(end.weight.u_minus[0] == doctest::Approx(1.0 / 3));

    FlowState<double> wild = seed;
    wild.x[3] = 1e200;
    wild.y[3] = 1e200;
    CHECK_THROWS_AS(rk4_integrate(wild, Flow::t1, 0.1, 10), IntegrationDiverged);
}

TEST_CASE("the determinant manifold is invariant under the flows")
{
    auto w = numeric_weight({rat(1, 2)}, {rat(1, 3)});
    for (Flow f : {Flow::t1, Flow::s1}) {
        auto rep = gamma_evolution_check(w, f, 2, 5, 1e-3, 1000);
        for (const auto& c : rep.checks) {
            INFO(c.name << " n = " << c.n << " " << c.detail);
            CHECK(c.ok);
        }
        CHECK(rep.max_residual < 1e-8);
    }
    auto sd = numeric_weight({rat(1, 2)}, {rat(1, 2)});
    auto rep = gamma_evolution_check(sd, Flow::t_selfdual, 2, 5, 1e-3, 1000);
    CHECK(rep.passed);
    CHECK_THROWS_AS(gamma_evolution_check(sd, Flow::t2, 2, 5, 1e-3, 10), ContractViolation);
}

TEST_CASE("flow names")
{
    for (Flow f : {Flow::t1, Flow::s1, Flow::t2, Flow::s2, Flow::t_selfdual})
        CHECK(parse_flow(flow_name(f)) == f);
    CHECK_THROWS_AS(parse_flow("t3"), ParseError);
}
