#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/experiments.hpp"
#include "netdesign/rng.hpp"

using namespace netdesign;

namespace {

struct SimSetup {
    NetworkData net;
    PosteriorState state;
    std::vector<Design> designs;
    CostParams params;
    RiskConfig risk;
};

SimSetup make_setup(std::uint64_t seed) {
    SimSetup s;
    auto [net, panel] = synth_environment(seed, RegimeConfig::sim_defaults());
    s.net = std::move(net);
    s.state = fit_posterior(s.net, panel);
    DMatrix rank = DMatrix::square(s.net.node_count);
    for (int i = 0; i < s.net.node_count; ++i)
        for (int j = 0; j < s.net.node_count; ++j)
            if (i != j) rank(i, j) = s.state.demand(i, j).mean() * s.net.distances(i, j);
    DesignGrid grid = DesignGrid::sim_defaults();
    for (int t = 0; t < kTopologyCount; ++t) {
        auto batch = enumerate_designs(s.net, grid, static_cast<Topology>(t), rank,
                                       s.state.total_mean_demand());
        for (auto& d : batch) s.designs.push_back(std::move(d));
    }
    return s;
}

}  // namespace

TEST_CASE("identity stress equals plain sampling bit for bit") {
    const SimSetup s = make_setup(10);
    StressConfig cfg;
    cfg.amplification = 1.0;
    cfg.disruption_prob = 0.0;
    cfg.count = 24;
    cfg.seed = 99;
    const auto stressed = stress_scenarios(s.state, cfg);
    const auto plain = sample_scenarios(s.state, 24, 99);
    for (int b = 0; b < 24; ++b) {
        CHECK(stressed[b].demand == plain[b].demand);
        CHECK(stressed[b].travel_time == plain[b].travel_time);
        CHECK(stressed[b].hub_reliability == plain[b].hub_reliability);
        CHECK(stressed[b].cost_multiplier == plain[b].cost_multiplier);
    }
}

TEST_CASE("amplification scales mean demand; full disruption doubles times") {
    const SimSetup s = make_setup(11);
    StressConfig cfg;
    cfg.amplification = 1.22;
    cfg.disruption_prob = 0.26;
    cfg.count = 180;
    cfg.seed = 7;
    const auto stressed = stress_scenarios(s.state, cfg);
    CHECK(stressed.size() == 180);

    double stress_total = 0.0;
    for (const auto& sc : stressed)
        for (int i = 0; i < s.net.node_count; ++i)
            for (int j = 0; j < s.net.node_count; ++j) stress_total += sc.demand(i, j);
    stress_total /= 180.0;
    const double target = 1.22 * s.state.total_mean_demand();
    // 3 SE of the scenario-mean of totals (poisson-ish variance ~ total)
    const double se = 3.0 * 1.22 * std::sqrt(s.state.total_mean_demand() / 180.0) + 3.0;
    CHECK(std::fabs(stress_total - target) < se);

    StressConfig full;
    full.amplification = 1.0;
    full.disruption_prob = 1.0;
    full.disruption_time_factor = 2.0;
    full.count = 6;
    full.seed = 13;
    const auto doubled = stress_scenarios(s.state, full);
    const auto plain = sample_scenarios(s.state, 6, 13);
    for (int b = 0; b < 6; ++b)
        for (int i = 0; i < s.net.node_count; ++i)
            for (int j = 0; j < s.net.node_count; ++j)
                if (i != j)
                    CHECK(doubled[b].travel_time(i, j) ==
                          doctest::Approx(2.0 * plain[b].travel_time(i, j)).epsilon(1e-12));
}

TEST_CASE("nominal scenario uses posterior point summaries") {
    const SimSetup s = make_setup(12);
    const Scenario nominal = nominal_scenario(s.state);
    for (int i = 0; i < s.net.node_count; ++i)
        for (int j = 0; j < s.net.node_count; ++j) {
            if (i == j) continue;
            CHECK(nominal.demand(i, j) ==
                  static_cast<long long>(std::llround(s.state.demand(i, j).mean())));
            CHECK(nominal.travel_time(i, j) ==
                  doctest::Approx(std::exp(s.state.traveltime(i, j).location)));
        }
    for (std::size_t h = 0; h < nominal.hub_reliability.size(); ++h)
        CHECK(nominal.hub_reliability[h] ==
              doctest::Approx(s.state.hub_reliability[h].mean()));
}

TEST_CASE("deterministic baseline worked cases") {
    const SimSetup s = make_setup(13);
    const Thresholds thr{42.0, 8.0};

    std::vector<Design> one = {s.designs[10]};
    CHECK(deterministic_baseline(one, s.net, s.state, s.params, thr,
                                 BaselineMode::mean_only)
              .index == 0);

    // two candidates differing only in capacity, both nominal-feasible:
    // the cheaper (lower) capacity wins
    DMatrix rank = DMatrix::square(s.net.node_count, 1.0);
    Design lo, hi;
    lo.topology = hi.topology = Topology::MAHS;
    lo.hubs = hi.hubs = {3, 7, 2};
    lo.capacity_multiplier = 1.40;
    hi.capacity_multiplier = 1.85;
    lo.label = "lo";
    hi.label = "hi";
    finalize_design(lo, s.net, s.state.total_mean_demand(), 3.0, 0.05);
    finalize_design(hi, s.net, s.state.total_mean_demand(), 3.0, 0.05);
    const Thresholds loose{1e6, 1e6};
    const BaselineChoice pick = deterministic_baseline({lo, hi}, s.net, s.state, s.params,
                                                       loose, BaselineMode::mean_only);
    CHECK(pick.index == 0);
    CHECK(pick.nominal_feasible);

    CHECK_THROWS_AS(deterministic_baseline({}, s.net, s.state, s.params, thr,
                                           BaselineMode::mean_only),
                    ValidationError);
}

TEST_CASE("cost-priority mode ignores thresholds") {
    const SimSetup s = make_setup(14);
    const Thresholds impossible{1e-6, 1e-6};
    const BaselineChoice pick = deterministic_baseline(
        s.designs, s.net, s.state, s.params, impossible, BaselineMode::cost_priority);
    // it picked the global nominal cost minimum; verify against a scan
    const Scenario nominal = nominal_scenario(s.state);
    double best = 1e300;
    for (const Design& d : s.designs)
        best = std::min(best,
                        evaluate_design(d, s.net, nominal, s.params, impossible).total_cost);
    CHECK(pick.nominal.total_cost == doctest::Approx(best));
}

TEST_CASE("comparing a design to itself yields zero gains") {
    const SimSetup s = make_setup(15);
    const auto scenarios = sample_scenarios(s.state, 30, 3);
    const ComparisonReport rep = compare_designs(
        {{"a", &s.designs[5]}, {"b", &s.designs[5]}}, s.net, scenarios, s.params, s.risk,
        0, 1, 1);
    CHECK(rep.gains.cvar_reduction_pct == doctest::Approx(0.0));
    CHECK(rep.gains.p95_reduction_pct == doctest::Approx(0.0));
    CHECK(rep.gains.service_gain_pp == doctest::Approx(0.0));
    CHECK(rep.gains.hold_gain_pp == doctest::Approx(0.0));
    CHECK(rep.gains.cost_premium_pct == doctest::Approx(0.0));
}

TEST_CASE("gain formulas match the reported fixtures") {
    MethodMetrics bayes, det;
    bayes.cvar_max_arrival = 78.484113;
    det.cvar_max_arrival = 84.723397;
    bayes.hold_reliability = 0.833333;
    det.hold_reliability = 0.622222;
    bayes.p95_max_arrival = 69.957250;
    det.p95_max_arrival = 75.617107;
    bayes.service_reliability = 0.900000;
    det.service_reliability = 0.811111;
    bayes.expected_cost = 12.538900;
    det.expected_cost = 12.273285;
    const ComparisonGains g = compute_gains(bayes, det);
    CHECK(g.cvar_reduction_pct == doctest::Approx(7.364298).epsilon(1e-6));
    CHECK(g.hold_gain_pp == doctest::Approx(21.111100).epsilon(1e-5));
    CHECK(g.p95_reduction_pct == doctest::Approx(7.484889).epsilon(1e-6));
    CHECK(g.service_gain_pp == doctest::Approx(8.888900).epsilon(1e-5));
    CHECK(g.cost_premium_pct == doctest::Approx(2.164174).epsilon(1e-6));
}

TEST_CASE("sensitivity grid reuses cached evaluations") {
    const SimSetup s = make_setup(16);
    const auto scenarios = sample_scenarios(s.state, 40, 5);
    std::vector<DesignSummary> summaries;
    for (std::size_t d = 0; d < 20; ++d) {
        const auto results =
            evaluate_batch(s.designs[d], s.net, scenarios, s.params, s.risk.thresholds());
        summaries.push_back(summarize_design(s.designs[d].label, s.designs[d].topology,
                                             results, s.risk, Normalizers{}));
    }
    const Normalizers nz = compute_normalizers(summaries);
    for (auto& x : summaries) rescore(x, s.risk, nz);

    reset_evaluation_count();
    const auto rows = sensitivity_grid(summaries, sim_weight_rows(), s.risk, nz);
    CHECK(evaluation_count() == 0);  // scoring only, never re-evaluates
    CHECK(rows.size() == 20);

    // one weight row reproduces plain select_best / deterministic in weights
    const auto single = sensitivity_grid(summaries, {s.risk.weights}, s.risk, nz);
    CHECK(single[0].selected_label == summaries[select_best(summaries).best].label);
    const auto again = sensitivity_grid(summaries, sim_weight_rows(), s.risk, nz);
    for (std::size_t r = 0; r < rows.size(); ++r)
        CHECK(rows[r].selected_label == again[r].selected_label);

    CHECK_THROWS_AS(sensitivity_grid(summaries, {}, s.risk, nz), ValidationError);
}

TEST_CASE("sim weight grid has the documented 20 rows") {
    const auto rows = sim_weight_rows();
    REQUIRE(rows.size() == 20);
    CHECK(rows[0].cost == doctest::Approx(0.15));
    CHECK(rows[0].time == doctest::Approx(0.15));
    CHECK(rows[0].emission == doctest::Approx(0.70));
    for (const auto& w : rows) {
        CHECK(w.cost + w.time + w.emission == doctest::Approx(1.0));
        CHECK(w.emission >= 0.0999);
    }
}

TEST_CASE("theorem harness degenerate and small-scale behavior") {
    // constant generator: all CVaR errors identically zero
    const TheoremReport degenerate =
        theorem_harness(3, {16, 64}, 10, 200, 20, 0.2, /*lognormal_sigma=*/0.0);
    for (double e : degenerate.median_abs_error) CHECK(e == 0.0);
    CHECK(degenerate.cvar_errors_decreasing);

    const TheoremReport small = theorem_harness(3, {32, 128, 512}, 40, 500, 50, 0.2);
    CHECK(small.median_abs_error.size() == 3);
    CHECK(small.selection_frequency >= 0.9);

    CHECK_THROWS_AS(theorem_harness(3, {64, 64}, 10, 100, 10, 0.2), ValidationError);
}
