#include "toeplab/combinatorics.hpp"

#include "toeplab/errors.hpp"
#include "toeplab/graded_poly.hpp"
#include "toeplab/toeplitz.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <numeric>
#include <thread>

namespace toeplab {

namespace {

using Counts = std::map<int, std::uint64_t>;

void merge(Counts& into, const Counts& from)
{
    for (const auto& [l, c] : from)
        into[l] += c;
}

std::uint64_t checked_power(int base, int exp, std::uint64_t limit)
{
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > limit / static_cast<std::uint64_t>(base))
            return limit + 1;
        r *= base;
    }
    return r;
}

// Permutations of 0..k-1 with the given first entry.
Counts permutation_block(int k, int first)
{
    std::vector<int> rest;
    for (int i = 0; i < k; ++i)
        if (i != first)
            rest.push_back(i);
    Counts c;
    std::vector<int> seq(k);
    seq[0] = first;
    do {
        std::copy(rest.begin(), rest.end(), seq.begin() + 1);
        ++c[longest_increasing(seq)];
    } while (std::next_permutation(rest.begin(), rest.end()));
    return c;
}

// Words with the given first letter.
Counts word_block(int k, int alpha, int first)
{
    Counts c;
    std::vector<int> w(k, 0);
    w[0] = first;
    while (true) {
        ++c[longest_increasing(w, false)];
        int i = k - 1;
        while (i >= 1 && w[i] == alpha - 1)
            w[i--] = 0;
        if (i < 1)
            break;
        ++w[i];
    }
    return c;
}

Rational factorial(int m)
{
    Rational r = 1;
    for (int i = 2; i <= m; ++i)
        r *= i;
    return r;
}

std::uint64_t to_u64(const Rational& q)
{
    if (q.get_den() != 1 || q < 0 || !q.get_num().fits_ulong_p())
        throw DomainError("tableau count is not a machine integer");
    return q.get_num().get_ui();
}

// Hook length of cell (i, j).
int hook(const std::vector<int>& lambda, int i, int j)
{
    int below = 0;
    for (size_t r = i + 1; r < lambda.size() && lambda[r] > j; ++r)
        ++below;
    return lambda[i] - j - 1 + below + 1;
}

void add_partitions(int remaining, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(remaining, cap); p >= 1; --p) {
        cur.push_back(p);
        add_partitions(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::string model_name(OracleModel m)
{
    switch (m) {
    case OracleModel::permutations:
        return "permutations";
    case OracleModel::odd_even:
        return "odd_even";
    case OracleModel::odd_odd:
        return "odd_odd";
    case OracleModel::words:
        return "words";
    }
    return "unknown";
}

OracleModel parse_model(const std::string& name)
{
    for (OracleModel m : {OracleModel::permutations, OracleModel::odd_even, OracleModel::odd_odd, OracleModel::words})
        if (model_name(m) == name)
            return m;
    throw ParseError("unknown oracle model '" + name + "'");
}

Rational OracleTable::cumulative(int n) const
{
    if (total == 0)
        throw ContractViolation("empty oracle table");
    std::uint64_t below = 0;
    for (const auto& [l, c] : counts)
        if (l <= n)
            below += c;
    Rational r(below);
    r /= Rational(total);
    return r;
}

int longest_increasing(const std::vector<int>& seq, bool strict)
{
    std::vector<int> tails;
    for (int v : seq) {
        auto it = strict ? std::lower_bound(tails.begin(), tails.end(), v)
                         : std::upper_bound(tails.begin(), tails.end(), v);
        if (it == tails.end())
            tails.push_back(v);
        else
            *it = v;
    }
    return static_cast<int>(tails.size());
}

int thread_count()
{
    if (const char* env = std::getenv("TOEPLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Blocks 0..count-1 spread over the workers; merged in a fixed order.
template <class F>
Counts blocks(int count, F block)
{
    int workers = std::min(count, thread_count());
    std::vector<std::future<std::vector<Counts>>> jobs;
    for (int w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [=] {
            std::vector<Counts> out;
            for (int first = w; first < count; first += workers)
                out.push_back(block(first));
            return out;
        }));
    Counts all;
    for (auto& j : jobs)
        for (const auto& c : j.get())
            merge(all, c);
    return all;
}

} // namespace

OracleTable lis_distribution(int k)
{
    if (k < 0)
        throw ContractViolation("permutation size must be non-negative");
    if (k > 9)
        throw RefusedSize("S_" + std::to_string(k) + " exceeds the enumeration bound k <= 9");
    OracleTable t;
    t.k = k;
    t.model = OracleModel::permutations;
    if (k == 0) {
        t.counts[0] = 1;
        t.total = 1;
        return t;
    }
    t.counts = blocks(k, [k](int first) { return permutation_block(k, first); });
    t.total = to_u64(factorial(k));
    return t;
}

OracleTable lis_odd_distribution(int k, bool odd_length)
{
    if (k < 0)
        throw ContractViolation("signed permutation size must be non-negative");
    if (2 * k + (odd_length ? 1 : 0) > 11)
        throw RefusedSize("signed permutations of length " + std::to_string(2 * k + (odd_length ? 1 : 0)) +
                          " exceed the enumeration bound 11");
    OracleTable t;
    t.k = k;
    t.model = odd_length ? OracleModel::odd_odd : OracleModel::odd_even;
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 1);
    std::vector<int> seq;
    do {
        for (unsigned signs = 0; signs < (1u << k); ++signs) {
            seq.clear();
            // pi(j) = +-sigma(j) for j > 0, pi(-j) = -pi(j).
            auto pi = [&](int j) { return (signs >> (j - 1)) & 1u ? -sigma[j - 1] : sigma[j - 1]; };
            for (int j = k; j >= 1; --j)
                seq.push_back(-pi(j));
            if (odd_length)
                seq.push_back(0);
            for (int j = 1; j <= k; ++j)
                seq.push_back(pi(j));
            ++t.counts[longest_increasing(seq)];
            ++t.total;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return t;
}

OracleTable word_lis_distribution(int k, int alpha)
{
    if (k < 0 || alpha < 1)
        throw ContractViolation("words need k >= 0 and alpha >= 1");
    const std::uint64_t limit = 10000000;
    std::uint64_t total = checked_power(alpha, k, limit);
    if (total > limit)
        throw RefusedSize(std::to_string(alpha) + "^" + std::to_string(k) + " words exceed the bound 10^7");
    OracleTable t;
    t.k = k;
    t.model = OracleModel::words;
    t.alpha = alpha;
    t.total = total;
    if (k == 0) {
        t.counts[0] = 1;
        return t;
    }
    t.counts = blocks(alpha, [k, alpha](int first) { return word_block(k, alpha, first); });
    return t;
}

std::uint64_t standard_tableaux(const std::vector<int>& lambda)
{
    int k = std::accumulate(lambda.begin(), lambda.end(), 0);
    Rational r = factorial(k);
    for (size_t i = 0; i < lambda.size(); ++i)
        for (int j = 0; j < lambda[i]; ++j)
            r /= hook(lambda, static_cast<int>(i), j);
    return to_u64(r);
}

std::uint64_t semistandard_tableaux(const std::vector<int>& lambda, int alpha)
{
    Rational r = 1;
    for (size_t i = 0; i < lambda.size(); ++i)
        for (int j = 0; j < lambda[i]; ++j) {
            r *= alpha + j - static_cast<int>(i);
            r /= hook(lambda, static_cast<int>(i), j);
        }
    return to_u64(r);
}

std::vector<std::vector<int>> partitions(int k)
{
    if (k < 0)
        throw ContractViolation("partitions of a negative integer");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    add_partitions(k, k, cur, out);
    return out;
}

OracleTable rsk_lis_distribution(int k)
{
    if (k > 20)
        throw RefusedSize("tableau counts above k = 20 overflow");
    OracleTable t;
    t.k = k;
    t.model = OracleModel::permutations;
    for (const auto& lambda : partitions(k)) {
        std::uint64_t f = standard_tableaux(lambda);
        t.counts[lambda.empty() ? 0 : lambda[0]] += f * f;
    }
    t.total = to_u64(factorial(k));
    return t;
}

OracleTable rsk_word_distribution(int k, int alpha)
{
    if (k < 0 || alpha < 1)
        throw ContractViolation("words need k >= 0 and alpha >= 1");
    std::uint64_t total = checked_power(alpha, k, UINT64_MAX / 2);
    if (k > 20 || total > UINT64_MAX / 2)
        throw RefusedSize("word count overflows");
    OracleTable t;
    t.k = k;
    t.model = OracleModel::words;
    t.alpha = alpha;
    t.total = total;
    for (const auto& lambda : partitions(k)) {
        std::uint64_t ss = semistandard_tableaux(lambda, alpha);
        if (ss != 0)
            t.counts[lambda.empty() ? 0 : lambda[0]] += standard_tableaux(lambda) * ss;
    }
    return t;
}

IdentityReport generating_identity_check(OracleModel model, int n, int k_max, int alpha, bool throw_on_mismatch)
{
    if (n < 0 || k_max < 0)
        throw ContractViolation("identity check needs n >= 0 and k_max >= 0");
    if (model == OracleModel::words && alpha < 1)
        throw ContractViolation("word identity needs alpha >= 1");
    auto vars = std::make_shared<VarSet>(std::vector<std::string>{"t", "s"}, std::vector<int>{1, 1});
    int order = model == OracleModel::words ? k_max : 2 * k_max + (model == OracleModel::odd_odd ? 2 : 0);
    GradedPoly t = GradedPoly::variable(vars, order, 0);
    GradedPoly s = GradedPoly::variable(vars, order, 1);
    GradedPoly zero(vars, order);
    auto tau = [&](Weight<GradedPoly> w) -> GradedPoly {
        ExactMoments<GradedPoly> mu(w);
        return toeplitz_det<GradedPoly>(mu, n, 0);
    };

    IdentityReport rep;
    rep.model = model;
    rep.n = n;
    rep.alpha = alpha;
    std::vector<GradedPoly> sides;
    Weight<GradedPoly> w;
    switch (model) {
    case OracleModel::permutations:
        w.u_plus = {t};
        w.u_minus = {t};
        sides.push_back(tau(w));
        break;
    case OracleModel::odd_even:
        w.u_plus = {zero, s * Rational(2)};
        w.u_minus = w.u_plus;
        sides.push_back(tau(w));
        break;
    case OracleModel::odd_odd:
        for (long sign : {1L, -1L}) {
            w.u_plus = {t, s * Rational(2 * sign)};
            w.u_minus = w.u_plus;
            sides.push_back(tau(w));
        }
        break;
    case OracleModel::words:
        w.d1 = -1;
        w.gp1 = alpha;
        w.u_minus = {-s};
        sides.push_back(tau(w));
        break;
    }

    for (int k = 0; k <= k_max; ++k) {
        IdentityEntry e;
        e.k = k;
        Rational kf = factorial(k);
        switch (model) {
        case OracleModel::permutations:
            e.determinant = sides[0].coeff({2 * k, 0});
            e.combinatorial = lis_distribution(k).cumulative(n) / kf;
            break;
        case OracleModel::odd_even:
            e.determinant = sides[0].coeff({0, 2 * k});
            e.combinatorial = Rational(1u << k) * lis_odd_distribution(k, false).cumulative(n) / kf;
            break;
        case OracleModel::odd_odd:
            // 1/4 d^2/dt^2 at t = 0 is half the t^2 coefficient.
            e.determinant = (sides[0].coeff({2, 2 * k}) + sides[1].coeff({2, 2 * k})) / 2;
            e.combinatorial = Rational(1u << k) * lis_odd_distribution(k, true).cumulative(n) / kf;
            break;
        case OracleModel::words:
            e.determinant = sides[0].coeff({0, k});
            // The weight carries e^{-s/z}, so the word side enters with (-alpha s)^k.
            e.combinatorial = Rational(checked_power(alpha, k, UINT64_MAX)) * word_lis_distribution(k, alpha).cumulative(n) / kf;
            if (k % 2)
                e.combinatorial = -e.combinatorial;
            break;
        }
        e.ok = e.determinant == e.combinatorial;
        rep.passed = rep.passed && e.ok;
        rep.entries.push_back(e);
        if (!e.ok && throw_on_mismatch)
            throw IdentityFailure(model_name(model) + " identity fails at n = " + std::to_string(n) +
                                  ", k = " + std::to_string(k) + ": " + e.determinant.get_str() + " vs " +
                                  e.combinatorial.get_str());
    }
    return rep;
}

} // namespace toeplab
