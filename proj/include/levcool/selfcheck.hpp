#pragma once

#include <string>
#include <vector>

namespace levcool {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Invariant checks run by `levcool check`. Deterministic.
std::vector<CheckOutcome> run_self_checks();

}  // namespace levcool
