#pragma once

#include <string>
#include <vector>

namespace flc {

struct VerifyRow {
    std::string name;
    std::string variant;
    double linf = 0.0;
    double observed_order = 0.0;
    bool pass = false;
    bool expected_pass = true;  ///< negative controls expect FAIL
};

struct VerifyResult {
    std::vector<VerifyRow> rows;
    std::string z_variant_passed;
    bool ok = false;  ///< every row matched its expectation
};

/// Runs the built-in certification suite (coefficient identities, z-evolution
/// variants, Riccati/tangent closed forms, energy identity, kernel
/// inequality) on fixed profiles with a fixed RNG seed.
VerifyResult run_verification();

/// Prints the fixed-format table; exit 0 iff all rows match expectation.
int verify_command();

}  // namespace flc
