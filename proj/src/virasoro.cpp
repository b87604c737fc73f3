#include "toeplab/virasoro.hpp"

#include "toeplab/toeplitz.hpp"

#include <algorithm>
#include <cstdlib>

namespace toeplab {

namespace {

// Sum of operator terms; a term that needs a time outside the ring caps the
// order just below its lowest degree.
struct Accumulator {
    GradedPoly sum;
    int cap = unbounded;

    explicit Accumulator(const GradedPoly& zero) : sum(zero) {}

    void add(const GradedPoly& term) { sum += term; }
    void drop(int lowest_degree) { cap = std::min(cap, lowest_degree - 1); }

    GradedPoly result() const
    {
        if (cap == unbounded || cap >= sum.order())
            return sum;
        return sum.truncated(cap);
    }
};

GradedPoly in_ring(const TimeRing& ring, const GradedPoly& f)
{
    if (!f.vars())
        return GradedPoly::constant(ring.vars, f.order(), f.constant_term());
    if (!(*f.vars() == *ring.vars))
        throw ContractViolation("polynomial does not live in the time ring");
    return f;
}

GradedPoly zero_of(const TimeRing& ring) { return GradedPoly(ring.vars, unbounded); }

int index_in(const TimeRing& ring, TimeFamily fam, int i)
{
    return fam == TimeFamily::t ? ring.t(i) : ring.s(i);
}

// c * time_m * g, with time_m possibly outside the ring.
void add_times(Accumulator& acc, const TimeRing& ring, TimeFamily fam, int m, const GradedPoly& g,
               const Rational& c)
{
    if (g.is_zero() || c == 0)
        return;
    int idx = index_in(ring, fam, m);
    if (idx < 0) {
        acc.drop(m + g.valuation());
        return;
    }
    acc.add(g.times_variable(idx) * c);
}

// d/d time_j f; zero for times outside the ring.
GradedPoly d_time(const TimeRing& ring, TimeFamily fam, int j, const GradedPoly& f)
{
    int idx = index_in(ring, fam, j);
    if (idx < 0)
        return zero_of(ring);
    return f.derivative(idx);
}

GradedPoly current(int k, int order, const Rational& beta, TimeFamily fam, const TimeRing& ring,
                   const GradedPoly& f)
{
    Rational sign = fam == TimeFamily::t ? 1 : -1;
    Accumulator acc(zero_of(ring));
    if (order == 1) {
        if (k > 0)
            acc.add(d_time(ring, fam, k, f) * sign);
        else if (k < 0)
            add_times(acc, ring, fam, -k, f, sign * Rational(-k) / (2 * beta));
        return acc.result();
    }
    // Second derivatives and quadratic terms carry sign^2 = 1.
    for (int i = 1; i < k; ++i)
        acc.add(d_time(ring, fam, k - i, d_time(ring, fam, i, f)));
    for (int j = std::max(1, k + 1); j <= ring.K; ++j)
        add_times(acc, ring, fam, j - k, d_time(ring, fam, j, f), Rational(j - k) / beta);
    for (int i = 1; i < -k && !f.is_zero(); ++i) {
        int j = -k - i;
        int a = index_in(ring, fam, i), b = index_in(ring, fam, j);
        if (a < 0 || b < 0)
            acc.drop(-k + f.valuation());
        else
            acc.add(f.times_variable(b).times_variable(a) * (Rational(i * j) / (4 * beta * beta)));
    }
    return acc.result();
}

} // namespace

TimeRing time_ring(int K, int order)
{
    if (K < 1 || 2 * K > VarSet::max_vars)
        throw ContractViolation("time ring needs 1 <= K <= " + std::to_string(VarSet::max_vars / 2));
    if (order < 1)
        throw ContractViolation("time ring needs a positive order");
    std::vector<std::string> names;
    std::vector<int> weights;
    for (const char* p : {"t", "s"})
        for (int i = 1; i <= K; ++i) {
            names.push_back(p + std::to_string(i));
            weights.push_back(i);
        }
    return {std::make_shared<VarSet>(names, weights), K, order};
}

GradedPoly tau_multiseries(const TimeRing& ring, int gamma, int n)
{
    if (n < 0)
        throw ContractViolation("tau index must be non-negative");
    if (n == 0)
        return GradedPoly::constant(ring.vars, ring.order, 1);
    Weight<GradedPoly> w;
    for (int i = 1; i <= ring.K; ++i) {
        w.u_plus.push_back(GradedPoly::variable(ring.vars, ring.order, ring.t(i), i));
        w.u_minus.push_back(GradedPoly::variable(ring.vars, ring.order, ring.s(i), -i));
    }
    w.gamma = gamma;
    ExactMoments<GradedPoly> mu(w);
    return toeplitz_det<GradedPoly>(mu, n, 0);
}

GradedPoly tau_multiseries(const TimeRing& ring, const Weight<Rational>& w, int n)
{
    bool pure = w.u_plus.empty() && w.u_minus.empty();
    for (const auto& f : detail::factors(w))
        pure = pure && !f.active();
    if (!pure)
        throw ContractViolation("tau multiseries takes z^gamma weights; the times supply the exponentials");
    return tau_multiseries(ring, w.gamma, n);
}

bool admissible(int k, const Rational& theta)
{
    return (k == -1 && theta == 0) || k == 0 || (k == 1 && theta == 1);
}

GradedPoly apply_virasoro(const VirasoroOp& op, const TimeRing& ring, const GradedPoly& input)
{
    if (!admissible(op.k, op.theta))
        throw ContractViolation("inadmissible Virasoro pair k = " + std::to_string(op.k) +
                                ", theta = " + op.theta.get_str());
    GradedPoly f = in_ring(ring, input);
    const auto T = TimeFamily::t, S = TimeFamily::minus_s;
    Rational n = op.n, g = op.gamma;
    Accumulator acc(zero_of(ring));
    switch (op.k) {
    case -1:
        for (int i = 1; i <= ring.K; ++i)
            add_times(acc, ring, T, i + 1, d_time(ring, T, i, f), i + 1);
        for (int i = 2; i <= ring.K; ++i)
            add_times(acc, ring, S, i - 1, d_time(ring, S, i, f), -(i - 1));
        add_times(acc, ring, T, 1, f, n);
        acc.add(d_time(ring, S, 1, f) * Rational(n - g));
        break;
    case 0:
        for (int i = 1; i <= ring.K; ++i) {
            add_times(acc, ring, T, i, d_time(ring, T, i, f), i);
            add_times(acc, ring, S, i, d_time(ring, S, i, f), -i);
        }
        acc.add(f * Rational(g * n));
        break;
    case 1:
        for (int i = 1; i <= ring.K; ++i)
            add_times(acc, ring, S, i + 1, d_time(ring, S, i, f), -(i + 1));
        for (int i = 2; i <= ring.K; ++i)
            add_times(acc, ring, T, i - 1, d_time(ring, T, i, f), i - 1);
        add_times(acc, ring, S, 1, f, n);
        acc.add(d_time(ring, T, 1, f) * Rational(n + g));
        break;
    }
    GradedPoly r = acc.result();
    if (!f.is_exact() && r.order() > f.order() - 1)
        r = r.truncated(f.order() - 1);
    return r;
}

GradedPoly apply_virasoro_from_currents(const VirasoroOp& op, const TimeRing& ring, const GradedPoly& input)
{
    if (op.k < -1 || op.k > 1)
        throw ContractViolation("Virasoro constraints are built for k in {-1, 0, 1}");
    GradedPoly f = in_ring(ring, input);
    Rational half = rat(1, 2);
    auto vec = [&](int k, int order, TimeFamily fam) -> GradedPoly {
        return heisenberg_apply({k, order, half, op.n, fam}, ring, f);
    };
    GradedPoly r = vec(op.k, 2, TimeFamily::t) - vec(-op.k, 2, TimeFamily::minus_s);
    GradedPoly mix = vec(op.k, 1, TimeFamily::t) * op.theta + vec(-op.k, 1, TimeFamily::minus_s) * (1 - op.theta);
    r -= mix * Rational(op.k - op.gamma);
    if (!f.is_exact() && r.order() > f.order() - 1)
        r = r.truncated(f.order() - 1);
    return r;
}

GradedPoly current_apply(int k, int order, const Rational& beta, TimeFamily fam, const TimeRing& ring,
                         const GradedPoly& f)
{
    if (order != 1 && order != 2)
        throw ContractViolation("current order must be 1 or 2");
    if (beta <= 0)
        throw ContractViolation("beta must be positive");
    return current(k, order, beta, fam, ring, in_ring(ring, f));
}

GradedPoly heisenberg_apply(const HeisenbergOp& op, const TimeRing& ring, const GradedPoly& input)
{
    GradedPoly f = in_ring(ring, input);
    Rational n = op.n, b = op.beta;
    Rational delta = op.k == 0 ? 1 : 0;
    GradedPoly j1 = current_apply(op.k, 1, b, op.family, ring, f);
    if (op.order == 1)
        return j1 + f * (n * delta);
    GradedPoly j2 = current_apply(op.k, 2, b, op.family, ring, f);
    Rational c1 = 2 * n * b + (op.k + 1) * (1 - b);
    Rational c0 = n * (n * b + 1 - b) * delta;
    return j2 * b + j1 * c1 + f * c0;
}

Rational central_charge(const Rational& beta)
{
    // (b^1/2 - b^-1/2)^2 = b - 2 + 1/b.
    return 1 - 6 * (beta - 2 + 1 / beta);
}

CommutatorReport commutator_check(int k, int l, const Rational& beta, int trials, std::mt19937_64& rng)
{
    if (std::abs(k) > 2 || std::abs(l) > 2)
        throw ContractViolation("commutator checks cover levels |k|, |l| <= 2");
    // Inputs use t_1..t_3; two operators reach at most four levels further.
    TimeRing ring = time_ring(8, 1);
    CommutatorReport rep;
    rep.beta = beta;
    std::uniform_int_distribution<int> ex(0, 2), num(-9, 9), den(1, 5);
    Rational delta = k == -l ? 1 : 0;
    Rational c = central_charge(beta);
    for (int trial = 0; trial < trials; ++trial) {
        GradedPoly f = zero_of(ring);
        for (int term = 0; term < 4; ++term) {
            std::vector<int> e(ring.vars->size(), 0);
            for (int i = 1; i <= 3; ++i)
                e[ring.t(i)] = ex(rng);
            Rational q(num(rng), den(rng));
            q.canonicalize();
            f += GradedPoly::monomial(ring.vars, unbounded, e, q);
        }
        for (int n = 0; n <= 2; ++n) {
            auto J = [&](int level, int order, const GradedPoly& g) -> GradedPoly {
                return heisenberg_apply({level, order, beta, n, TimeFamily::t}, ring, g);
            };
            auto check = [&](const std::string& name, const GradedPoly& residual) {
                bool ok = residual.is_zero();
                rep.entries.push_back({name, k, l, n, trial, ok});
                rep.passed = rep.passed && ok;
            };
            check("[J1_k, J1_l]", J(k, 1, J(l, 1, f)) - J(l, 1, J(k, 1, f)) - f * (Rational(k) / (2 * beta) * delta));
            check("[J2_k, J1_l]", J(k, 2, J(l, 1, f)) - J(l, 1, J(k, 2, f)) + J(k + l, 1, f) * Rational(l) -
                                      f * (rat(k * (k + 1), 2) * (1 / beta - 1) * delta));
            check("[J2_k, J2_l]", J(k, 2, J(l, 2, f)) - J(l, 2, J(k, 2, f)) - J(k + l, 2, f) * Rational(k - l) -
                                      f * (c * rat(k * k * k - k, 12) * delta));
        }
    }
    return rep;
}

VirasoroReport virasoro_residual_suite(const std::vector<int>& gammas, int n_max, int K, int order)
{
    if (n_max < 0)
        throw ContractViolation("n_max must be non-negative");
    VirasoroReport rep;
    rep.K = K;
    rep.K_live = std::max(K, order);
    rep.order = order;
    rep.safe_order = order - 1;
    TimeRing ring = time_ring(rep.K_live, order);
    const std::pair<int, Rational> pairs[] = {{-1, 0}, {0, 0}, {1, 1}};
    for (int gamma : gammas)
        for (int n = 0; n <= n_max; ++n) {
            GradedPoly tau = tau_multiseries(ring, gamma, n);
            for (const auto& [k, theta] : pairs) {
                GradedPoly r = apply_virasoro({k, gamma, n, theta}, ring, tau);
                VirasoroResidual e{k, n, gamma, theta, static_cast<int>(r.term_count()), {}};
                if (!r.is_zero())
                    e.residual = r.to_string();
                else if (r.order() < rep.safe_order)
                    e.residual = "known only to order " + std::to_string(r.order());
                rep.passed = rep.passed && e.residual.empty();
                rep.residuals.push_back(std::move(e));
            }
        }
    return rep;
}

} // namespace toeplab
