#include "netdesign/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netdesign/csv.hpp"
#include "netdesign/oracles.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

namespace {

SuiteResult conjugacy_suite(std::uint64_t seed, int cases) {
    double worst = 0.0;
    std::string worst_family = "none";
    Substream rng(seed, Substream::kGeneric, 11);
    for (int c = 0; c < cases; ++c) {
        {
            GammaPosterior prior{1.0 + 4.0 * rng.uniform(), 0.5 + 2.5 * rng.uniform()};
            const int n = 1 + static_cast<int>(rng.uniform() * 6.0);
            std::vector<long long> obs(n);
            for (auto& x : obs) x = rng.poisson(1.0 + 20.0 * rng.uniform());
            const double err = oracle::gamma_poisson_grid_l1(prior, obs);
            if (err > worst) { worst = err; worst_family = "gamma_poisson"; }
        }
        {
            NIGPosterior prior{rng.normal(0.0, 1.0), 0.5 + 2.0 * rng.uniform(),
                               1.5 + 2.0 * rng.uniform(), 0.3 + 1.5 * rng.uniform()};
            const int n = 1 + static_cast<int>(rng.uniform() * 6.0);
            std::vector<double> obs(n);
            for (auto& x : obs) x = rng.lognormal(0.5, 0.8);
            const double err = oracle::nig_lognormal_grid_l1(prior, obs);
            if (err > worst) { worst = err; worst_family = "nig_lognormal"; }
        }
        {
            BetaPosterior prior{1.0 + 7.0 * rng.uniform(), 1.0 + 4.0 * rng.uniform()};
            const int n = 1 + static_cast<int>(rng.uniform() * 5.0);
            std::vector<std::pair<long long, long long>> obs(n);
            for (auto& [s, t] : obs) {
                t = 5 + static_cast<long long>(rng.uniform() * 60.0);
                const double p = 0.2 + 0.7 * rng.uniform();
                s = 0;
                for (long long i = 0; i < t; ++i)
                    if (rng.uniform() < p) ++s;
            }
            const double err = oracle::beta_binomial_grid_l1(prior, obs);
            if (err > worst) { worst = err; worst_family = "beta_binomial"; }
        }
    }
    SuiteResult r;
    r.name = "conjugacy_grid_integration";
    r.pass = worst < 1e-6;
    r.detail = "max rel L1 " + format_full(worst) + " (" + worst_family + ")";
    return r;
}

SuiteResult cvar_suite(std::uint64_t seed, int instances,
                       double (*cvar_fn)(const std::vector<double>&, double)) {
    double worst_gap = 0.0;
    double worst_prop = 0.0;
    Substream rng(seed, Substream::kGeneric, 12);
    for (int c = 0; c < instances; ++c) {
        const int n = 2 + static_cast<int>(rng.uniform() * 200.0);
        const double alpha = 0.05 + 0.9 * rng.uniform();
        std::vector<double> y(n);
        for (auto& v : y) v = rng.normal(0.0, 10.0);
        const double closed = cvar_fn(y, alpha);
        worst_gap = std::max(worst_gap, std::fabs(closed - oracle::cvar_bruteforce(y, alpha)));

        // algebraic properties
        double mean = 0.0, mx = y[0];
        for (double v : y) { mean += v; mx = std::max(mx, v); }
        mean /= n;
        worst_prop = std::max(worst_prop, mean - closed);            // CVaR >= mean
        worst_prop = std::max(worst_prop, closed - mx);              // CVaR <= max
        const double var = order_quantile(y, alpha);
        worst_prop = std::max(worst_prop, var - closed);             // CVaR >= VaR
        const double a2 = std::min(0.999, alpha + 0.2 * rng.uniform());
        worst_prop = std::max(worst_prop, closed - cvar_fn(y, a2));  // monotone in alpha
        const double shift = rng.normal(0.0, 5.0);
        std::vector<double> ys(y);
        for (auto& v : ys) v += shift;
        worst_prop = std::max(worst_prop, std::fabs(cvar_fn(ys, alpha) - closed - shift));
        const double lambda = 0.1 + 3.0 * rng.uniform();
        std::vector<double> yl(y);
        for (auto& v : yl) v *= lambda;
        worst_prop = std::max(worst_prop, std::fabs(cvar_fn(yl, alpha) - lambda * closed));
    }
    SuiteResult r;
    r.name = "cvar_bruteforce_and_properties";
    r.pass = worst_gap <= 1e-9 && worst_prop <= 1e-12;
    r.detail = "max oracle gap " + format_full(worst_gap) + ", max property violation " +
               format_full(worst_prop);
    return r;
}

SuiteResult cvar_negative_control(std::uint64_t seed) {
    // A deliberately off-by-one CVaR: the oracle must flag it.
    auto broken = [](const std::vector<double>& samples, double alpha) {
        std::vector<double> s(samples);
        std::sort(s.begin(), s.end());
        const std::size_t B = s.size();
        auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(B) - 1e-12));
        k = std::min(k + 1, B);  // one knot too high
        const double zeta = s[k - 1];
        double excess = 0.0;
        for (std::size_t i = k; i < B; ++i) excess += s[i] - zeta;
        return zeta + excess / ((1.0 - alpha) * static_cast<double>(B));
    };
    // alpha*B must be fractional: at integer alpha*B the RU objective is
    // flat between the two order statistics and the defect is invisible
    Substream rng(seed, Substream::kGeneric, 13);
    bool caught = false;
    for (int c = 0; c < 50 && !caught; ++c) {
        std::vector<double> y(41);
        for (auto& v : y) v = rng.normal(0.0, 10.0);
        if (std::fabs(broken(y, 0.8) - oracle::cvar_bruteforce(y, 0.8)) > 1e-9) caught = true;
    }
    SuiteResult r;
    r.name = "cvar_negative_control";
    r.pass = caught;
    r.detail = caught ? "injected off-by-one detected by oracle"
                      : "oracle failed to flag the injected defect";
    return r;
}

SuiteResult pareto_suite(std::uint64_t seed, int sets) {
    Substream rng(seed, Substream::kGeneric, 14);
    bool ok = true;
    for (int c = 0; c < sets && ok; ++c) {
        const int n = 1 + static_cast<int>(rng.uniform() * 200.0);
        std::vector<DesignSummary> summaries(n);
        std::vector<std::pair<double, double>> pts(n);
        for (int i = 0; i < n; ++i) {
            // coarse values make exact ties common
            const double a = std::floor(rng.uniform() * 20.0);
            const double b = std::floor(rng.uniform() * 20.0);
            summaries[i].mean_cost = a;
            summaries[i].cvar_max_arrival = b;
            pts[i] = {a, b};
        }
        ok = pareto_front_indices(summaries) == oracle::pareto_bruteforce(pts);
    }
    SuiteResult r;
    r.name = "pareto_bruteforce";
    r.pass = ok;
    r.detail = ok ? "sweep equals pairwise dominance on every set" : "mismatch found";
    return r;
}

SuiteResult determinism_suite(std::uint64_t seed) {
    RegimeConfig regime = RegimeConfig::sim_defaults();
    SynthConfig synth;
    auto [network, panel] = synth_environment(seed, regime, synth);
    const PosteriorState state = fit_posterior(network, panel);
    const auto s1 = sample_scenarios(state, 16, seed);
    const auto s2 = sample_scenarios(state, 16, seed);
    bool same_draws = true;
    for (std::size_t b = 0; b < s1.size(); ++b)
        same_draws = same_draws && s1[b].demand == s2[b].demand &&
                     s1[b].travel_time == s2[b].travel_time &&
                     s1[b].hub_reliability == s2[b].hub_reliability &&
                     s1[b].cost_multiplier == s2[b].cost_multiplier;

    DMatrix rank = DMatrix::square(network.node_count);
    for (int i = 0; i < network.node_count; ++i)
        for (int j = 0; j < network.node_count; ++j)
            if (i != j) rank(i, j) = state.demand(i, j).mean() * network.distances(i, j);
    const auto designs = enumerate_designs(network, DesignGrid::sim_defaults(),
                                           Topology::DSAHS, rank, state.total_mean_demand());
    CostParams costs;
    Thresholds thr{60.0, 16.0};
    const auto r1 = evaluate_batch(designs[0], network, s1, costs, thr, 1);
    const auto r4 = evaluate_batch(designs[0], network, s1, costs, thr, 4);
    const bool same_eval = r1 == r4;

    SuiteResult r;
    r.name = "seed_and_thread_determinism";
    r.pass = same_draws && same_eval;
    r.detail = same_draws ? (same_eval ? "bit-identical across reruns and thread counts"
                                       : "thread count changed results")
                          : "reruns disagree";
    return r;
}

}  // namespace

std::vector<SuiteResult> run_verification(std::uint64_t seed, const VerifyOptions& options,
                                          TheoremReport* theorem_out) {
    std::vector<SuiteResult> out;
    out.push_back(conjugacy_suite(seed, options.conjugacy_cases));
    out.push_back(cvar_suite(seed, options.cvar_instances,
                             options.cvar_fn ? options.cvar_fn : &empirical_cvar));
    out.push_back(cvar_negative_control(seed));
    out.push_back(pareto_suite(seed, options.pareto_sets));
    out.push_back(determinism_suite(seed));

    const TheoremReport report =
        theorem_harness(seed, options.theorem_sizes, options.theorem_seeds, options.argmin_B,
                        options.argmin_replications, options.risk_gap);
    if (theorem_out) *theorem_out = report;
    SuiteResult th;
    th.name = "theorem_harness";
    th.pass = report.cvar_errors_decreasing && report.argmin_consistent;
    th.detail = "cvar errors decreasing: " +
                std::string(report.cvar_errors_decreasing ? "yes" : "no") +
                ", selection frequency " + format_full(report.selection_frequency);
    out.push_back(th);
    return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace netdesign
