#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace adaswitch::checks {

struct PropertyOutcome {
    std::string suite;
    std::string name;
    bool pass = true;
    long checked = 0;
    std::string counterexample;  // replayable description of the failing instance
};

struct ValidateOptions {
    double budget_seconds = 60.0;  // shared by every property of the run
    std::uint64_t seed = 1;
    long max_checks = 2000;        // per property
    long min_checks = 20;          // run even past the budget
    int qfrac_offset = 0;          // mutation hook for Q-FRAC*'s accepted-order count
};

const std::vector<std::string>& suite_names();  // framework, oltq, kserver, orra, adaswitch

// suite is one of suite_names() or "all". Throws std::invalid_argument otherwise.
std::vector<PropertyOutcome> run_validation(const std::string& suite, const ValidateOptions& opt,
                                            std::ostream* progress = nullptr);

}  // namespace adaswitch::checks
