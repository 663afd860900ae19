#pragma once

#include <string>
#include <vector>

#include "risofdm/common.hpp"

namespace risofdm {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The fast deterministic self-check suite behind `risofdm verify`:
/// channel/DFT equivalence, surrogate identities, gradient probes,
/// waterfilling optimality, assignment re-simulation, projection rules, and
/// the tiny-scale exhaustive bound. Statistical trend checks live in the
/// acceptance test suite.
std::vector<CheckResult> run_verification(std::uint64_t seed);

}  // namespace risofdm
