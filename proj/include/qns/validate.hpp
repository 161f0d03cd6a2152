#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qns {

struct CheckResult {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

// Built-in oracle suites: compact-vs-moment cumulant equivalence on random
// Liouvillians, the single-spin sum rule, the thermal two-level FDT residual,
// white-noise estimator calibration, and trajectory reproducibility.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed, int workers);

std::string validation_report_json(const std::vector<CheckResult>& results);

} // namespace qns
