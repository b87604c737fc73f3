#pragma once

#include "toeplab/graded_poly.hpp"
#include "toeplab/weight.hpp"

#include <random>
#include <string>
#include <vector>

namespace toeplab {

// Graded ring in t_1..t_K, s_1..s_K with weight(t_i) = weight(s_i) = i.
struct TimeRing {
    VarSetPtr vars;
    int K = 0;
    int order = 0;

    int t(int i) const { return i >= 1 && i <= K ? i - 1 : -1; }
    int s(int i) const { return i >= 1 && i <= K ? K + i - 1 : -1; }
};

// 2K variables must fit the graded ring.
TimeRing time_ring(int K, int order);

// tau_n of z^gamma exp(sum_{i <= K} (t_i z^i - s_i z^{-i})) as the n x n Toeplitz
// determinant of its moments; tau_0 = 1.
GradedPoly tau_multiseries(const TimeRing& ring, int gamma, int n);
// Pure-gamma weights only; exponents and binomial factors raise ContractViolation.
GradedPoly tau_multiseries(const TimeRing& ring, const Weight<Rational>& w, int n);

struct VirasoroOp {
    int k = 0;
    int gamma = 0;
    int n = 0;
    Rational theta = 0;
};

// (k, theta) in {(-1, 0), (0, any), (1, 1)}.
bool admissible(int k, const Rational& theta);

// The explicit first-order constraint for k in {-1, 0, 1}. Functions are taken to
// depend on the ring's variables only. A term that needs a time beyond the ring is
// dropped when it starts above the truncation order of f and raises otherwise.
// Inadmissible (k, theta) raises ContractViolation.
GradedPoly apply_virasoro(const VirasoroOp& op, const TimeRing& ring, const GradedPoly& f);

// The same constraint assembled from the beta = 1/2 vector operators in t and -s,
// for any theta.
GradedPoly apply_virasoro_from_currents(const VirasoroOp& op, const TimeRing& ring, const GradedPoly& f);

// One time family: t (sign +1) or -s (sign -1).
enum class TimeFamily { t, minus_s };

// Level k vector Heisenberg (order 1) or Virasoro (order 2) operator at index n.
struct HeisenbergOp {
    int k = 0;
    int order = 1;
    Rational beta = rat(1, 2);
    int n = 0;
    TimeFamily family = TimeFamily::t;
};

// Scalar operators J_k^(1), J_k^(2) of one family.
GradedPoly current_apply(int k, int order, const Rational& beta, TimeFamily fam, const TimeRing& ring,
                         const GradedPoly& f);
// Vector operators: J_k^(1) + n delta_k0 and
// beta J_k^(2) + (2 n beta + (k + 1)(1 - beta)) J_k^(1) + n (n beta + 1 - beta) delta_k0.
GradedPoly heisenberg_apply(const HeisenbergOp& op, const TimeRing& ring, const GradedPoly& f);

// c = 1 - 6 (beta^1/2 - beta^-1/2)^2.
Rational central_charge(const Rational& beta);

struct CommutatorEntry {
    std::string relation;
    int k = 0, l = 0, n = 0;
    int trial = 0;
    bool ok = false;
};

struct CommutatorReport {
    Rational beta;
    std::vector<CommutatorEntry> entries;
    bool passed = true;
};

// [J1_k, J1_l], [J2_k, J1_l] and [J2_k, J2_l] against their closed forms on random
// exact polynomials in the t family, for n in {0, 1, 2}.
CommutatorReport commutator_check(int k, int l, const Rational& beta, int trials, std::mt19937_64& rng);

struct VirasoroResidual {
    int k = 0, n = 0, gamma = 0;
    Rational theta;
    int nonzero_terms = 0;
    std::string residual; // empty when zero to the safe order
};

struct VirasoroReport {
    int K = 0;        // requested live times
    int K_live = 0;   // times present in the ring
    int order = 0;    // truncation order of tau
    int safe_order = 0;
    std::vector<VirasoroResidual> residuals;
    bool passed = true;
};

// Applies the three admissible constraints to tau_0..tau_{n_max} for each gamma.
// The ring carries max(K, order) times of each kind so that no truncated sum
// reaches below the safe order order - 1.
VirasoroReport virasoro_residual_suite(const std::vector<int>& gammas, int n_max, int K, int order);

} // namespace toeplab
