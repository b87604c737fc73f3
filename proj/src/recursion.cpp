#include "toeplab/recursion.hpp"

namespace toeplab {

std::string relation_name(RelationKind k)
{
    switch (k) {
    case RelationKind::first:
        return "first";
    case RelationKind::second:
        return "second";
    case RelationKind::dual_second:
        return "dual_second";
    case RelationKind::gamma:
        return "gamma";
    case RelationKind::gamma_tilde:
        return "gamma_tilde";
    case RelationKind::self_dual:
        return "self_dual";
    }
    return "unknown";
}

std::vector<RelationUse> relations_for_target(CaseId id, int n1, int n2, int m)
{
    using K = RelationKind;
    switch (id) {
    case CaseId::case1:
        if (n1 == n2)
            return {{K::first, m - n1 - 1}, {K::second, m - n1 - 2}};
        if (n2 == n1 + 1)
            return {{K::first, m - n1 - 2}, {K::second, m - n1 - 2}};
        if (n2 == n1 - 1)
            return {{K::first, m - n1 - 1}, {K::dual_second, m - n1 - 1}};
        return {};
    case CaseId::case2:
        if (n1 == n2)
            return {{K::first, m - n1 - 1}, {K::dual_second, m - n1 - 1}};
        if (n2 == n1 + 1)
            return {{K::first, m - n1 - 1}, {K::second, m - n1 - 2}};
        if (n2 == n1 - 1)
            return {{K::first, m - n1}, {K::dual_second, m - n1 - 1}};
        return {};
    case CaseId::case3:
        if (std::abs(n1 - n2) > 1 || n1 + n2 == 0)
            return {};
        return {{K::gamma, m - n1}, {K::gamma_tilde, m - n2}};
    case CaseId::self_dual:
        if (n1 == 0)
            return {};
        return {{K::self_dual, m - n1}};
    }
    return {};
}

int first_solvable_index(CaseId id, int n1, int n2)
{
    if (relations_for_target(id, n1, n2, 0).empty())
        throw UnsolvableStep("no relation pairing for N1 = " + std::to_string(n1) + ", N2 = " + std::to_string(n2));
    for (int m = 1;; ++m) {
        bool ok = true;
        for (const auto& u : relations_for_target(id, n1, n2, m))
            ok = ok && u.n >= 1;
        if (ok)
            return m;
    }
}

ConfinementReport confinement_probe(const Weight<Rational>& w, int n, int sign, const std::vector<Rational>& window,
                                    int precision, int probe)
{
    int N = w.N1();
    if (N == 0)
        throw ContractViolation("confinement probe needs a nonempty exponent list");
    if (sign != 1 && sign != -1)
        throw ContractViolation("confinement sign must be +1 or -1");
    if (n - 2 * N < 1)
        throw ContractViolation("confinement probe needs n >= 2N + 1");
    if (static_cast<int>(window.size()) != 2 * N - 1)
        throw ContractViolation("confinement window must hold x_{n-2N}..x_{n-2}");
    if (precision < 2 || probe < 1)
        throw ContractViolation("confinement probe needs precision >= 2 and probe >= 1");

    Weight<LaurentEps> lw = lift_weight<LaurentEps>(w);
    lw.u_minus = lw.u_plus;
    std::vector<LaurentEps> x(n, LaurentEps(0));
    x[0] = LaurentEps(1);
    for (int k = 0; k < 2 * N - 1; ++k)
        x[n - 2 * N + k] = LaurentEps(window[k]);
    x[n - 1] = LaurentEps(0, {Rational(sign), Rational(1)}, precision);
    CaseTag tag;
    tag.id = CaseId::self_dual;

    LatticeView<LaurentEps> lv(x, x);
    try {
        lv = solve_forward(lv, lw, tag, n + probe);
    } catch (const UnsolvableStep& e) {
        throw DegenerateInitialData(std::string("confinement orbit stalls: ") + e.what());
    }

    ConfinementReport rep;
    rep.n = n;
    rep.sign = sign;
    rep.precision = precision;
    for (int k = n - 1; k <= n + probe; ++k) {
        rep.indices.push_back(k);
        rep.valuations.push_back(lv.x(k).valuation());
        rep.values.push_back(lv.x(k));
    }
    const LaurentEps& xn = lv.x(n);
    const LaurentEps& xn1 = lv.x(n + 1);
    if (xn.valuation() >= 0)
        throw DegenerateInitialData("x_" + std::to_string(n) + " stays finite; the window does not reach the singularity");
    if (xn.valuation() != -1)
        throw ConfinementFailure("x_" + std::to_string(n) + " has a pole of order " +
                                 std::to_string(-xn.valuation()));
    rep.blowup_leading = xn.coeff(-1);
    if (xn1.valuation() < 0 || xn1.coeff(0) != Rational(-sign))
        throw ConfinementFailure("x_" + std::to_string(n + 1) + " = " + xn1.to_string() + ", expected " +
                                 std::to_string(-sign) + " + O(eps)");
    rep.after_constant = xn1.coeff(0);
    for (int k = n + 2; k <= n + probe; ++k)
        if (lv.x(k).valuation() < 0)
            throw ConfinementFailure("singularity not confined: x_" + std::to_string(k) + " = " +
                                     lv.x(k).to_string());
    return rep;
}

} // namespace toeplab
