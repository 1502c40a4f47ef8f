#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fht/geometry.hpp"
#include "fht/parallel.hpp"

namespace fht {

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240915ull;
    double tol = 0.0; // 0 = per-check defaults
    Exec exec = Exec::serial;
};

/// Invariant battery over the configured interval: geometry identities,
/// g-function boundary conditions, model-solution consistency, the matrix
/// routes and positivity, kernel algebra, and the discrete-operator checks.
std::vector<CheckResult> run_verification(const IntervalConfig& cfg, const VerifyOptions& opt);

} // namespace fht
