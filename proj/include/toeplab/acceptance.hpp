#pragma once

#include <string>
#include <vector>

namespace toeplab {

struct AcceptanceResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

constexpr int acceptance_count = 14;

std::string acceptance_name(int id);

// Runs one criterion; library errors are caught and reported as a failure.
AcceptanceResult run_criterion(int id);

// Runs the listed criteria in order, all of them when the list is empty.
std::vector<AcceptanceResult> run_acceptance(const std::vector<int>& ids = {});

} // namespace toeplab
