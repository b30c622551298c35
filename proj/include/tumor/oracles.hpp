#pragma once

#include <string>
#include <vector>

namespace tumor {

struct OracleResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Closed-form regression suite for the singular-IVP solver: linear slopes
/// and endpoints, C1 branch selection, measured integrator order, slope vs
/// difference quotients, eps-family consistency, start-offset uniqueness,
/// reflection, and a deliberate mutation that must be caught.
std::vector<OracleResult> run_oracle_suite();

} // namespace tumor
