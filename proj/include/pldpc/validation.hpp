#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pldpc {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    int table1_q = 10000;     // realizations for the threshold spot checks
    double table1_tol_db = 0.10;
    bool include_table1 = true;
    int workers = 1;
};

// Property and invariant suite plus threshold spot checks against the four
// reference operating points. Returns one result per check.
std::vector<CheckResult> run_validation_suite(const ValidationOptions& options);

} // namespace pldpc
