#include "toeplab/weight.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace toeplab {

std::string case_name(CaseId id)
{
    switch (id) {
    case CaseId::case1:
        return "case1";
    case CaseId::case2:
        return "case2";
    case CaseId::case3:
        return "case3";
    case CaseId::self_dual:
        return "self_dual";
    }
    return "unknown";
}

namespace {

using nlohmann::json;

Rational rational_field(const json& j, const std::string& name)
{
    if (!j.is_string())
        throw ParseError("field '" + name + "' must be a rational string \"p/q\"");
    return parse_rational(j.get<std::string>());
}

Rational exponent_field(const json& j, const std::string& name)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_number_float()) {
        double d = j.get<double>();
        if (!std::isfinite(d))
            throw ParseError("field '" + name + "' is not finite");
        return Rational(d);
    }
    throw ParseError("field '" + name + "' must be a number");
}

std::vector<Rational> rational_array(const json& j, const std::string& name)
{
    if (!j.is_array())
        throw ParseError("field '" + name + "' must be an array");
    std::vector<Rational> out;
    for (const auto& e : j)
        out.push_back(rational_field(e, name));
    return out;
}

} // namespace

WeightSpec parse_weight_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("weight document must be a JSON object");
    static const std::set<std::string> known = {"u_plus", "u_minus", "gamma", "d1",   "d2",  "gp1",
                                                "gp2",    "gpp1",    "gpp2",  "mode"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw ParseError("unknown field '" + key + "'");
    WeightSpec w;
    if (j.contains("u_plus"))
        w.u_plus = rational_array(j["u_plus"], "u_plus");
    if (j.contains("u_minus"))
        w.u_minus = rational_array(j["u_minus"], "u_minus");
    if (j.contains("gamma")) {
        if (!j["gamma"].is_number_integer())
            throw ParseError("field 'gamma' must be an integer");
        w.gamma = j["gamma"].get<int>();
    }
    if (j.contains("d1"))
        w.d1 = rational_field(j["d1"], "d1");
    if (j.contains("d2"))
        w.d2 = rational_field(j["d2"], "d2");
    if (j.contains("gp1"))
        w.gp1 = exponent_field(j["gp1"], "gp1");
    if (j.contains("gp2"))
        w.gp2 = exponent_field(j["gp2"], "gp2");
    if (j.contains("gpp1"))
        w.gpp1 = exponent_field(j["gpp1"], "gpp1");
    if (j.contains("gpp2"))
        w.gpp2 = exponent_field(j["gpp2"], "gpp2");
    if (j.contains("mode")) {
        if (!j["mode"].is_string())
            throw ParseError("field 'mode' must be a string");
        std::string m = j["mode"].get<std::string>();
        if (m == "exact")
            w.mode = Mode::exact;
        else if (m == "numeric")
            w.mode = Mode::numeric;
        else
            throw ParseError("mode must be \"exact\" or \"numeric\"");
    }
    return w;
}

WeightSpec load_weight_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open weight file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_weight_json(ss.str());
}

namespace detail {

CaseTag classify_from_factors(const std::vector<FactorData>& fs, int n1, int n2, bool symmetric_u, int gamma)
{
    std::vector<const FactorData*> active;
    for (const auto& f : fs) {
        if (f.d == 0 && f.gpp != 0)
            throw DomainError("binomial factor in 1/z with d = 0");
        if (f.active())
            active.push_back(&f);
    }
    CaseTag tag;
    if (active.size() == 2) {
        if (active[0]->d == active[1]->d)
            throw UnclassifiableWeight("two active binomial factors share d = " + format_rational(active[0]->d));
        tag.id = CaseId::case1;
        tag.abc = {1, -active[0]->d - active[1]->d, active[0]->d * active[1]->d};
        return tag;
    }
    if (active.size() == 1) {
        Rational d = active[0]->d;
        tag.id = CaseId::case2;
        tag.d = d;
        Abc left{1, -d, 0};
        Abc right{0, 1, -d};
        if (n2 == n1 - 1) {
            tag.abc = left;
            tag.alternate_abc = right;
        } else {
            tag.abc = right;
            tag.alternate_abc = left;
        }
        return tag;
    }
    tag.abc = {0, 1, 0};
    tag.id = symmetric_u && gamma == 0 && n1 > 0 ? CaseId::self_dual : CaseId::case3;
    return tag;
}

} // namespace detail

std::complex<double> evaluate_symbol(const WeightSpec& w, std::complex<double> z)
{
    std::complex<double> expo = 0;
    std::complex<double> zi = 1.0 / z;
    std::complex<double> zp = 1, zm = 1;
    for (size_t i = 0; i < w.u_plus.size(); ++i) {
        zp *= z;
        expo += w.u_plus[i].get_d() * zp / static_cast<double>(i + 1);
    }
    for (size_t i = 0; i < w.u_minus.size(); ++i) {
        zm *= zi;
        expo += w.u_minus[i].get_d() * zm / static_cast<double>(i + 1);
    }
    std::complex<double> r = std::exp(expo) * std::pow(z, w.gamma);
    auto factor = [&](const Rational& d, const Rational& gp, const Rational& gpp) {
        if (d == 0)
            return;
        double dd = d.get_d();
        if (gp != 0)
            r *= std::pow(1.0 - dd * z, gp.get_d());
        if (gpp != 0)
            r *= std::pow(1.0 - zi / dd, gpp.get_d());
    };
    factor(w.d1, w.gp1, w.gpp1);
    factor(w.d2, w.gp2, w.gpp2);
    return r;
}

double numeric_moment(const WeightSpec& w, int k, int M)
{
    const double two_pi = 2.0 * std::acos(-1.0);
    std::complex<double> acc = 0;
    for (int j = 0; j < M; ++j) {
        double th = two_pi * j / M;
        std::complex<double> z = std::polar(1.0, th);
        acc += evaluate_symbol(w, z) * std::polar(1.0, k * th);
    }
    return acc.real() / M;
}

NumericMoments::NumericMoments(const WeightSpec& w, int kmax, int M) : kmax_(kmax), mu_(2 * kmax + 1)
{
    if (M < 2 * kmax + 2)
        throw ContractViolation("quadrature node count too small for the requested moments");
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<std::complex<double>> acc(2 * kmax + 1);
    for (int j = 0; j < M; ++j) {
        double th = two_pi * j / M;
        std::complex<double> f = evaluate_symbol(w, std::polar(1.0, th));
        for (int k = -kmax; k <= kmax; ++k)
            acc[k + kmax] += f * std::polar(1.0, k * th);
    }
    for (int k = -kmax; k <= kmax; ++k)
        mu_[k + kmax] = acc[k + kmax].real() / M;
}

double NumericMoments::operator()(int k) const
{
    if (k < -kmax_ || k > kmax_)
        throw ContractViolation("numeric moment index out of the computed range");
    return mu_[k + kmax_];
}

LocusTimes locus_times(const Weight<Rational>& w, int bound)
{
    if (bound < std::max(w.N1(), w.N2()))
        throw ContractViolation("locus index bound below the exponent degrees");
    LocusTimes lt;
    auto power = [](const Rational& q, int k) {
        Rational r = 1;
        for (int i = 0; i < k; ++i)
            r *= q;
        return r;
    };
    for (int i = 1; i <= bound; ++i) {
        Rational ti = i <= w.N1() ? w.u_plus[i - 1] : Rational(0);
        Rational si = i <= w.N2() ? -w.u_minus[i - 1] : Rational(0);
        for (const auto& f : detail::factors(w)) {
            if (f.d == 0)
                continue;
            ti -= f.gp * power(f.d, i);
            si += f.gpp * power(Rational(1) / f.d, i);
        }
        lt.t.push_back(ti / i);
        lt.s.push_back(si / i);
    }
    return lt;
}

} // namespace toeplab
