#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/experiments.hpp"

namespace netdesign {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int conjugacy_cases = 100;   // per model family
    int cvar_instances = 1000;
    int pareto_sets = 500;
    std::vector<int> theorem_sizes = {64, 256, 1024};
    int theorem_seeds = 100;
    int argmin_B = 2000;
    int argmin_replications = 200;
    double risk_gap = 0.2;
    // Override hook for the negative-control test: a deliberately broken
    // CVaR must be caught by the oracle comparison.
    double (*cvar_fn)(const std::vector<double>&, double) = nullptr;
};

// Oracle suites: conjugacy grid integration, CVaR brute force + algebraic
// properties, Pareto brute force, seed/thread determinism, and the
// theorem harness. Returns one pass/fail row per suite.
std::vector<SuiteResult> run_verification(std::uint64_t seed, const VerifyOptions& options,
                                          TheoremReport* theorem_out = nullptr);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace netdesign
