#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "netdesign/verify.hpp"

using namespace netdesign;

namespace {

// Off-by-one threshold: test fixture for the negative control.
double broken_cvar(const std::vector<double>& samples, double alpha) {
    std::vector<double> s(samples);
    std::sort(s.begin(), s.end());
    const std::size_t B = s.size();
    auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(B) - 1e-12));
    k = std::min(k + 1, B);
    const double zeta = s[k - 1];
    double excess = 0.0;
    for (std::size_t i = k; i < B; ++i) excess += s[i] - zeta;
    return zeta + excess / ((1.0 - alpha) * static_cast<double>(B));
}

VerifyOptions quick_options() {
    VerifyOptions opt;
    opt.conjugacy_cases = 3;
    opt.cvar_instances = 120;
    opt.pareto_sets = 40;
    opt.theorem_sizes = {32, 128};
    opt.theorem_seeds = 30;
    opt.argmin_B = 2000;  // the separation needs the full scenario size
    opt.argmin_replications = 50;
    return opt;
}

const SuiteResult& find(const std::vector<SuiteResult>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r;
    REQUIRE(false);
    return rs.front();
}

}  // namespace

TEST_CASE("verification suites pass with the real implementation") {
    const auto results = run_verification(7, quick_options());
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
    CHECK(all_passed(results));
}

TEST_CASE("an injected off-by-one CVaR fails the named suite") {
    VerifyOptions opt = quick_options();
    opt.cvar_fn = &broken_cvar;
    const auto results = run_verification(7, opt);
    CHECK_FALSE(find(results, "cvar_bruteforce_and_properties").pass);
    CHECK_FALSE(all_passed(results));
    // unrelated suites stay green
    CHECK(find(results, "pareto_bruteforce").pass);
    CHECK(find(results, "seed_and_thread_determinism").pass);
}
