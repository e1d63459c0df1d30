// verify.hpp — The acceptance suite: twelve end-to-end checks with fixed
// parameters and tolerances.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wqt {

struct CriterionResult {
    int id{0};
    std::string title;
    bool passed{false};
    bool skipped{false};
    std::string detail;
    double seconds{0.0};
};

struct VerifyOptions {
    bool skip_lattice{false};
    // Multiplies every acceptance tolerance; values below 1 tighten the suite.
    double tol_scale{1.0};
    unsigned jobs{1};
    // Called as soon as each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

// "PASS  3  title  (1.2 s)  detail"
std::string format_result(const CriterionResult& r);

} // namespace wqt
