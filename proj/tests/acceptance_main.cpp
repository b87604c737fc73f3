#include "toeplab/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <vector>

// Prints one line per criterion; the exit status is nonzero when any fails.
int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i)
        ids.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& r : toeplab::run_acceptance(ids)) {
        std::printf("%s %2d %s (%.1fs): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
