#include "toeplab/lattice.hpp"

#include <sstream>

namespace toeplab {

std::string BandMonomial::to_string() const
{
    std::ostringstream os;
    os << (sign < 0 ? "-" : "+") << "x_" << x_index << " y_" << y_index;
    for (int k : v_indices)
        os << " v_" << k;
    return os.str();
}

namespace {

std::vector<int> range(int lo, int hi)
{
    std::vector<int> r;
    for (int k = lo; k <= hi; ++k)
        r.push_back(k);
    return r;
}

} // namespace

LeadingTerms leading_terms(int which, int p, EntryPosition pos, int n)
{
    if (which != 1 && which != 2)
        throw ContractViolation("lattice matrix must be 1 or 2");
    if (p < 1)
        throw ContractViolation("leading terms need p >= 1");
    int N = p - 1;
    if (n - N - 1 < 0)
        throw ContractViolation("leading terms reach below index 0");
    LeadingTerms r;
    if (pos == EntryPosition::diagonal) {
        r.top = {-1, n + N, n - 1, range(n, n + N - 1)};
        r.bottom = {-1, n, n - N - 1, range(n - N, n - 1)};
        if (which == 2) {
            std::swap(r.top.x_index, r.top.y_index);
            std::swap(r.bottom.x_index, r.bottom.y_index);
        }
        return r;
    }
    if (which == 1) {
        r.top = {-1, n + N + 1, n - 1, range(n, n + N)};
        r.bottom = {-1, n + 1, n - N - 1, range(n - N, n)};
        return r;
    }
    if (p < 2)
        throw ContractViolation("(L2)_{n+1,n} = v_n has no monomial expansion");
    r.top = {-1, n, n + N, range(n, n + N - 1)};
    r.bottom = {-1, n - N, n, range(n - N + 1, n)};
    return r;
}

} // namespace toeplab
