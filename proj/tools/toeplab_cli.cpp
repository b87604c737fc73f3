#include "toeplab/acceptance.hpp"
#include "toeplab/combinatorics.hpp"
#include "toeplab/flows.hpp"
#include "toeplab/recursion.hpp"
#include "toeplab/toeplitz.hpp"
#include "toeplab/virasoro.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace toeplab;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string weight_path;
    std::string output;
    int order = 12;
    int n_max = 6;
    std::string mode; // empty: from the weight file
    std::string case_override;
    std::string perturb_moment;
    int seed_order = 0; // solve: 0 means twice the order
    // flow
    std::string flow = "t1";
    double dt = 1e-3;
    int steps = 1000;
    int every = 100;
    // virasoro
    int K = 2;
    std::vector<int> gammas = {-2, -1, 0, 1, 2};
    // lis
    int k = 6;
    std::string model = "permutations";
    int alpha = 2;
    // confine
    int n = 5;
    int sign = 1;
    std::string t = "1/2";
    std::vector<std::string> window = {"2/7"};
    int probe = 4;
    // all
    std::vector<int> criteria;
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw ContractViolation("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string format_double(double d)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

std::string show(const Rational& q) { return format_rational(q); }
std::string show(const Series& s) { return s.to_string(); }
std::string show(double d) { return format_double(d); }

int term_count(const Rational& q) { return q == 0 ? 0 : 1; }
int term_count(const Series& s)
{
    int c = 0;
    for (const auto& x : s.coeffs())
        c += x != 0;
    return c;
}

// u_i = r_i t as series of order D, or the rational weight itself when it has no exponents.
Weight<Series> series_weight(const Weight<Rational>& w, int order)
{
    std::vector<Series> up, um;
    for (const auto& r : w.u_plus)
        up.push_back(Series::variable(order, r));
    for (const auto& r : w.u_minus)
        um.push_back(Series::variable(order, r));
    return with_exponents(w, up, um);
}

bool has_exponents(const Weight<Rational>& w) { return !w.u_plus.empty() || !w.u_minus.empty(); }

struct Perturbation {
    int k = 0;
    Rational delta = 0;
};

std::optional<Perturbation> parse_perturbation(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("--perturb-moment expects k:delta, got '" + text + "'");
    Perturbation p;
    try {
        p.k = std::stoi(text.substr(0, colon));
    } catch (const std::exception&) {
        throw ParseError("--perturb-moment index is not an integer: '" + text + "'");
    }
    p.delta = parse_rational(text.substr(colon + 1));
    return p;
}

// Moments with one entry shifted.
template <class R, class Base>
struct PerturbedMoments {
    const Base& base;
    std::optional<Perturbation> p;

    R operator()(int k) const
    {
        R m = base(k);
        if (p && p->k == k)
            m = m + lift<R>(p->delta);
        return m;
    }
};

Abc parse_abc(const std::string& text)
{
    std::vector<Rational> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        v.push_back(parse_rational(part));
    if (v.size() != 3)
        throw ParseError("--case-override expects a,b,c, got '" + text + "'");
    return {v[0], v[1], v[2]};
}

CaseTag resolve_case(const Weight<Rational>& w, const Options& o)
{
    CaseTag tag = classify_case(w);
    if (o.case_override.empty())
        return tag;
    Abc abc = parse_abc(o.case_override);
    if (tag.id != CaseId::case1 && tag.id != CaseId::case2)
        throw ContractViolation("--case-override applies to Case 1 and Case 2 weights only");
    if (!admissible_abc(w, abc))
        throw ContractViolation("(a, b, c) = (" + show(abc.a) + ", " + show(abc.b) + ", " + show(abc.c) +
                                ") is not admissible for this weight");
    tag.abc = abc;
    return tag;
}

Mode resolve_mode(const WeightSpec& w, const Options& o)
{
    if (o.mode.empty())
        return w.mode;
    if (o.mode == "exact")
        return Mode::exact;
    if (o.mode == "numeric")
        return Mode::numeric;
    throw ParseError("--mode must be exact or numeric");
}

ojson abc_json(const Abc& abc) { return ojson::array({show(abc.a), show(abc.b), show(abc.c)}); }

template <class R>
bool residual_ok(const R& r, int order)
{
    if constexpr (std::is_same_v<R, double>)
        return std::abs(r) <= 1e-8;
    else
        return is_zero(r) && truncation_order(r) >= order;
}

template <class R, class Moments>
ojson verify_state(const Moments& mu, const Weight<R>& w, const CaseTag& tag, const Options& o, bool& ok)
{
    int reach = std::max(w.N1(), w.N2());
    auto st = build_state_from_moments<R>(mu, o.n_max + reach + 3);
    LatticeView<R> lv(st);
    auto rep = verify_relations(lv, w, tag);
    ojson j;
    j["case"] = case_name(tag.id);
    j["abc"] = abc_json(tag.abc);
    if (rep.constant)
        j["constant"] = show(*rep.constant);
    if (rep.dual_constant)
        j["dual_constant"] = show(*rep.dual_constant);
    ojson rows = ojson::array();
    ok = true;
    for (const auto& e : rep.residuals) {
        if (e.n > o.n_max)
            continue;
        ojson r;
        r["relation"] = e.name;
        r["n"] = e.n;
        bool good = residual_ok(e.value, o.order);
        if constexpr (std::is_same_v<R, double>) {
            r["abs"] = format_double(std::abs(e.value));
        } else {
            r["nonzero_terms"] = term_count(e.value);
            r["known_to_order"] = truncation_order(e.value) == unbounded ? -1 : truncation_order(e.value);
            if (!is_zero(e.value))
                r["value"] = show(e.value);
        }
        r["zero"] = good;
        ok = ok && good;
        rows.push_back(r);
    }
    j["residuals"] = rows;
    j["verified"] = ok;
    return j;
}

int cmd_verify(const Options& o)
{
    WeightSpec spec = load_weight_file(o.weight_path);
    Mode mode = resolve_mode(spec, o);
    CaseTag tag = resolve_case(spec, o);
    auto pert = parse_perturbation(o.perturb_moment);
    bool ok = false;
    ojson j;
    if (mode == Mode::numeric) {
        int reach = std::max(spec.N1(), spec.N2());
        NumericMoments base(spec, o.n_max + reach + 6);
        PerturbedMoments<double, NumericMoments> mu{base, pert};
        j = verify_state<double>(mu, lift_weight<double>(spec), tag, o, ok);
    } else if (has_exponents(spec)) {
        auto w = series_weight(spec, o.order);
        ExactMoments<Series> base(w);
        PerturbedMoments<Series, ExactMoments<Series>> mu{base, pert};
        j = verify_state<Series>(mu, w, tag, o, ok);
    } else {
        ExactMoments<Rational> base(spec);
        PerturbedMoments<Rational, ExactMoments<Rational>> mu{base, pert};
        j = verify_state<Rational>(mu, static_cast<const Weight<Rational>&>(spec), tag, o, ok);
    }
    ojson out;
    out["command"] = "verify";
    out["mode"] = mode == Mode::exact ? "exact" : "numeric";
    out["order"] = o.order;
    out["n_max"] = o.n_max;
    out.update(j);
    Output(o.output).stream() << out.dump(2) << "\n";
    return ok ? 0 : 1;
}

template <class R>
int solve_rows(const Weight<R>& w, const CaseTag& tag, const Options& o, std::ostream& os)
{
    auto st = build_state(w, o.n_max);
    int first = first_solvable_index(tag.id, w.N1(), w.N2());
    LatticeView<R> lv = seed_view(st, std::min(first, o.n_max + 1));
    os << "n,x_n,y_n,dx,dy,source\n";
    auto row = [&](int n, R x, R y, const std::string& source) {
        R ex = st.x[n], ey = st.y[n];
        if constexpr (std::is_same_v<R, Series>) {
            int ord = std::min({o.order, x.order(), y.order(), ex.order(), ey.order()});
            x = x.truncated(ord);
            y = y.truncated(ord);
            ex = ex.truncated(ord);
            ey = ey.truncated(ord);
        }
        R dx = x - ex, dy = y - ey;
        os << n << "," << csv_field(show(x)) << "," << csv_field(show(y)) << "," << csv_field(show(dx)) << ","
           << csv_field(show(dy)) << "," << source << "\n";
        return is_zero(dx) && is_zero(dy);
    };
    bool ok = true;
    for (int n = 0; n <= lv.max_index(); ++n)
        ok = row(n, lv.x(n), lv.y(n), "seed") && ok;
    // Rows already written stay in place when a step is unsolvable.
    for (int m = lv.max_index() + 1; m <= o.n_max; ++m) {
        lv = solve_forward(lv, w, tag, m);
        ok = row(m, lv.x(m), lv.y(m), "solved") && ok;
    }
    return ok ? 0 : 1;
}

bool trivial_weight(const WeightSpec& w)
{
    auto zero = [](const std::vector<Rational>& u) {
        for (const auto& x : u)
            if (x != 0)
                return false;
        return true;
    };
    for (const auto& f : detail::factors(w))
        if (f.active())
            return false;
    return w.gamma == 0 && zero(w.u_plus) && zero(w.u_minus);
}

int cmd_solve(const Options& o)
{
    WeightSpec spec = load_weight_file(o.weight_path);
    if (resolve_mode(spec, o) != Mode::exact)
        throw ContractViolation("solve runs in exact mode");
    Output out(o.output);
    std::ostream& os = out.stream();
    if (trivial_weight(spec)) {
        // rho = 1: every Toeplitz matrix is the identity.
        os << "n,x_n,y_n,dx,dy,source\n";
        for (int n = 0; n <= o.n_max; ++n)
            os << n << "," << (n == 0 ? 1 : 0) << "," << (n == 0 ? 1 : 0) << ",0,0,trivial\n";
        return 0;
    }
    CaseTag tag = resolve_case(spec, o);
    if (has_exponents(spec))
        return solve_rows(series_weight(spec, o.seed_order > 0 ? o.seed_order : 2 * o.order), tag, o, os);
    return solve_rows(static_cast<const Weight<Rational>&>(spec), tag, o, os);
}

int cmd_flow(const Options& o)
{
    WeightSpec spec = load_weight_file(o.weight_path);
    Flow f = parse_flow(o.flow);
    if (o.steps < 0 || o.every < 1)
        throw ContractViolation("--steps must be >= 0 and --every >= 1");
    int reach = std::max({spec.N1(), spec.N2(), 2});
    FlowState<double> s = numeric_flow_state(spec, o.n_max + 2 * reach + 12);
    if (f == Flow::t_selfdual)
        s.y = s.x;
    Output out(o.output);
    std::ostream& os = out.stream();
    os << "t,n,x_n,y_n,gamma_residual\n";
    auto emit = [&](double t, const FlowState<double>& st) {
        auto lv = st.view();
        for (int n = 1; n <= o.n_max; ++n) {
            double g = residual_gamma(lv, st.weight, n);
            os << format_double(t) << "," << n << "," << format_double(st.x[n]) << "," << format_double(st.y[n])
               << "," << format_double(g) << "\n";
        }
    };
    emit(0, s);
    rk4_integrate(s, f, o.dt, o.steps, [&](int step, const FlowState<double>& st) {
        if (step % o.every == 0)
            emit(step * o.dt, st);
    });
    return 0;
}

int cmd_virasoro(const Options& o)
{
    auto rep = virasoro_residual_suite(o.gammas, o.n_max, o.K, o.order);
    ojson j;
    j["command"] = "virasoro";
    j["K"] = rep.K;
    j["K_live"] = rep.K_live;
    j["order"] = rep.order;
    j["safe_order"] = rep.safe_order;
    ojson rows = ojson::array();
    for (const auto& r : rep.residuals) {
        ojson e;
        e["k"] = r.k;
        e["n"] = r.n;
        e["gamma"] = r.gamma;
        e["theta"] = show(r.theta);
        e["nonzero_terms"] = r.nonzero_terms;
        if (!r.residual.empty())
            e["residual"] = r.residual;
        rows.push_back(e);
    }
    j["residuals"] = rows;
    j["passed"] = rep.passed;
    Output(o.output).stream() << j.dump(2) << "\n";
    return rep.passed ? 0 : 1;
}

int cmd_lis(const Options& o)
{
    OracleModel m = parse_model(o.model);
    OracleTable t;
    switch (m) {
    case OracleModel::permutations:
        t = lis_distribution(o.k);
        break;
    case OracleModel::odd_even:
        t = lis_odd_distribution(o.k, false);
        break;
    case OracleModel::odd_odd:
        t = lis_odd_distribution(o.k, true);
        break;
    case OracleModel::words:
        t = word_lis_distribution(o.k, o.alpha);
        break;
    }
    Output out(o.output);
    std::ostream& os = out.stream();
    os << "k,L,count,probability\n";
    for (const auto& [L, c] : t.counts) {
        Rational p(Integer(std::to_string(c)), Integer(std::to_string(t.total)));
        p.canonicalize();
        os << t.k << "," << L << "," << c << "," << show(p) << "\n";
    }
    bool ok = true;
    for (int n = 0; n <= o.n_max; ++n) {
        auto rep = generating_identity_check(m, n, o.k, m == OracleModel::words ? o.alpha : 0, false);
        ok = ok && rep.passed;
        std::cerr << "identity " << model_name(m) << " n = " << n << " k <= " << o.k << ": "
                  << (rep.passed ? "pass" : "FAIL") << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_confine(const Options& o)
{
    Weight<Rational> w;
    if (!o.weight_path.empty()) {
        w = load_weight_file(o.weight_path);
    } else {
        Rational t = parse_rational(o.t);
        w.u_plus = {t};
        w.u_minus = {t};
    }
    std::vector<Rational> window;
    for (const auto& s : o.window)
        window.push_back(parse_rational(s));
    auto rep = confinement_probe(w, o.n, o.sign, window, o.order, o.probe);
    ojson j;
    j["command"] = "confine";
    j["n"] = rep.n;
    j["sign"] = rep.sign;
    j["precision"] = rep.precision;
    ojson rows = ojson::array();
    for (size_t i = 0; i < rep.indices.size(); ++i) {
        ojson e;
        e["index"] = rep.indices[i];
        e["valuation"] = rep.valuations[i];
        e["value"] = rep.values[i].to_string();
        rows.push_back(e);
    }
    j["values"] = rows;
    j["blowup_leading"] = show(rep.blowup_leading);
    j["after_constant"] = show(rep.after_constant);
    j["confined"] = true;
    Output(o.output).stream() << j.dump(2) << "\n";
    return 0;
}

int cmd_all(const Options& o)
{
    Output out(o.output);
    std::ostream& os = out.stream();
    bool ok = true;
    for (int id : o.criteria)
        if (id < 1 || id > acceptance_count)
            throw ContractViolation("criteria are numbered 1.." + std::to_string(acceptance_count));
    for (const auto& r : run_acceptance(o.criteria)) {
        os << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
        os.flush();
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Toeplitz lattice recursions, flows and constraints"};
    app.require_subcommand(1);
    Options o;

    auto weight_opts = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--weight", o.weight_path, "weight JSON file")->check(CLI::ExistingFile);
        if (required)
            opt->required();
    };
    auto common = [&](CLI::App* c) { c->add_option("--output,-o", o.output, "output file (default stdout)"); };

    auto* verify = app.add_subcommand("verify", "residuals of the case-appropriate relations");
    weight_opts(verify, true);
    common(verify);
    verify->add_option("--order", o.order, "series order D")->check(CLI::Range(1, 200));
    verify->add_option("--n-max", o.n_max, "largest relation index")->check(CLI::Range(1, 60));
    verify->add_option("--mode", o.mode, "exact or numeric (default from the weight file)");
    verify->add_option("--case-override", o.case_override, "a,b,c triple for Case 1 and 2");
    verify->add_option("--perturb-moment", o.perturb_moment, "k:delta added to mu_k");

    auto* solve = app.add_subcommand("solve", "forward solve from determinant seeds");
    weight_opts(solve, true);
    common(solve);
    solve->add_option("--order", o.order, "series order D")->check(CLI::Range(1, 200));
    solve->add_option("--n-max", o.n_max, "last index")->check(CLI::Range(1, 60));
    solve->add_option("--seed-order", o.seed_order, "order of the determinant seeds (default 2 D)")
        ->check(CLI::Range(0, 400));
    solve->add_option("--case-override", o.case_override, "a,b,c triple for Case 1 and 2");

    auto* flow = app.add_subcommand("flow", "RK4 integration of a lattice flow");
    weight_opts(flow, true);
    common(flow);
    flow->add_option("--flow", o.flow, "t1, s1, t2, s2 or t_selfdual");
    flow->add_option("--dt", o.dt, "step");
    flow->add_option("--steps", o.steps, "number of steps");
    flow->add_option("--every", o.every, "report every this many steps");
    flow->add_option("--n-max", o.n_max, "largest reported index")->check(CLI::Range(1, 60));

    auto* vir = app.add_subcommand("virasoro", "Virasoro constraints on tau_n");
    common(vir);
    vir->add_option("--K", o.K, "live times of each kind")->check(CLI::Range(1, 8));
    vir->add_option("--order", o.order, "truncation order")->check(CLI::Range(1, 8));
    vir->add_option("--n-max", o.n_max, "largest n")->check(CLI::Range(0, 8));
    vir->add_option("--gamma", o.gammas, "gamma values");

    auto* lis = app.add_subcommand("lis", "LIS distributions and generating identities");
    common(lis);
    lis->add_option("--k", o.k, "size")->check(CLI::Range(0, 24));
    lis->add_option("--n-max", o.n_max, "largest n in the identity check")->check(CLI::Range(0, 12));
    lis->add_option("--model", o.model, "permutations, odd_even, odd_odd or words");
    lis->add_option("--alpha", o.alpha, "alphabet size for words")->check(CLI::Range(1, 100));

    auto* confine = app.add_subcommand("confine", "singularity confinement probe");
    weight_opts(confine, false);
    common(confine);
    confine->add_option("--n", o.n, "index of the blow-up");
    confine->add_option("--order", o.order, "eps precision");
    confine->add_option("--sign", o.sign, "x_{n-1} = sign + eps")->check(CLI::IsMember({-1, 1}));
    confine->add_option("--t", o.t, "u_1 = u_-1 when no weight file is given");
    confine->add_option("--window", o.window, "x_{n-2N}..x_{n-2} as rationals");
    confine->add_option("--probe", o.probe, "indices past the blow-up")->check(CLI::Range(1, 20));

    auto* all = app.add_subcommand("all", "acceptance battery");
    common(all);
    all->add_option("--criteria", o.criteria, "criterion numbers (default all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorClass::config);
    }

    try {
        if (*verify)
            return cmd_verify(o);
        if (*solve)
            return cmd_solve(o);
        if (*flow)
            return cmd_flow(o);
        if (*vir)
            return cmd_virasoro(o);
        if (*lis)
            return cmd_lis(o);
        if (*confine)
            return cmd_confine(o);
        if (*all)
            return cmd_all(o);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return static_cast<int>(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorClass::config);
    }
    return static_cast<int>(ErrorClass::config);
}
