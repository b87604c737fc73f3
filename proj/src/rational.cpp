#include "toeplab/rational.hpp"

#include "toeplab/errors.hpp"

#include <cctype>

namespace toeplab {

namespace {

bool all_digits(const std::string& s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text)
{
    std::string s = text;
    std::string sign;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        if (s[0] == '-')
            sign = "-";
        s = s.substr(1);
    }
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw ParseError("not a rational literal: '" + text + "'");
    Integer d(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + text + "'");
    Rational r(Integer(sign + num), d);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& q)
{
    return q.get_str();
}

Rational factorial(unsigned k)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return Rational(f);
}

Rational binomial(long n, long k)
{
    if (k < 0)
        return 0;
    // Generalized binomial so that negative n also works.
    Rational r = 1;
    for (long i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

} // namespace toeplab
