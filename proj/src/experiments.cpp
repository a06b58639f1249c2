#include "netdesign/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/parallel.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

void StressConfig::validate() const {
    if (amplification <= 0.0) throw ValidationError("amplification must be positive");
    if (disruption_prob < 0.0 || disruption_prob > 1.0)
        throw ValidationError("disruption probability must lie in [0,1]");
    if (disruption_time_factor <= 0.0)
        throw ValidationError("disruption time factor must be positive");
    if (count <= 0) throw ValidationError("stress scenario count must be positive");
}

std::vector<Scenario> stress_scenarios(const PosteriorState& state, const StressConfig& cfg) {
    cfg.validate();
    std::vector<Scenario> scenarios = sample_scenarios(state, cfg.count, cfg.seed);
    const int n = state.node_count;
    for (Scenario& sc : scenarios) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                sc.demand(i, j) = static_cast<long long>(
                    std::llround(cfg.amplification * static_cast<double>(sc.demand(i, j))));
            }
        // Disruption marks consume a dedicated substream, so the identity
        // config (amplification 1, probability 0) stays bit-identical to
        // plain sampling.
        Substream ds(cfg.seed, static_cast<std::uint64_t>(sc.scenario_id),
                     Substream::kDisruption);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (ds.uniform() < cfg.disruption_prob)
                    sc.travel_time(i, j) *= cfg.disruption_time_factor;
            }
    }
    return scenarios;
}

Scenario nominal_scenario(const PosteriorState& state) {
    const int n = state.node_count;
    Scenario sc;
    sc.scenario_id = -1;
    sc.demand = IMatrix::square(n);
    sc.travel_time = DMatrix::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            sc.demand(i, j) = static_cast<long long>(std::llround(state.demand(i, j).mean()));
            sc.travel_time(i, j) = std::exp(state.traveltime(i, j).location);
        }
    sc.hub_reliability.reserve(state.hub_reliability.size());
    for (const auto& bp : state.hub_reliability)
        sc.hub_reliability.push_back(std::clamp(bp.mean(), kReliabilityClamp, 1.0));
    // Plug-in lognormal mean; the predictive log-t has no finite mean.
    const double sigma2 = state.cost.beta / std::max(state.cost.alpha - 1.0, 1e-12);
    sc.cost_multiplier = std::exp(state.cost.location + 0.5 * sigma2);
    return sc;
}

BaselineChoice deterministic_baseline(const std::vector<Design>& candidates,
                                      const NetworkData& network, const PosteriorState& state,
                                      const CostParams& params, const Thresholds& thresholds,
                                      BaselineMode mode) {
    if (candidates.empty()) throw ValidationError("baseline needs at least one candidate");
    const Scenario nominal = nominal_scenario(state);

    BaselineChoice choice;
    bool have_feasible = false;
    double best_feasible_cost = 0.0;
    std::size_t best_any = 0;
    double best_any_cost = 0.0;
    EvaluationResult best_feasible_res, best_any_res;

    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const EvaluationResult res =
            evaluate_design(candidates[c], network, nominal, params, thresholds);
        const bool feasible = res.service_ok && res.hold_ok;
        auto better = [&](double cost, double incumbent, std::size_t inc_idx) {
            if (cost != incumbent) return cost < incumbent;
            return candidates[c].label < candidates[inc_idx].label;
        };
        if (c == 0 || better(res.total_cost, best_any_cost, best_any)) {
            best_any = c;
            best_any_cost = res.total_cost;
            best_any_res = res;
        }
        if (feasible && (!have_feasible ||
                         better(res.total_cost, best_feasible_cost, choice.index))) {
            have_feasible = true;
            choice.index = c;
            best_feasible_cost = res.total_cost;
            best_feasible_res = res;
        }
    }

    if (mode == BaselineMode::mean_only && have_feasible) {
        choice.nominal = best_feasible_res;
        choice.nominal_feasible = true;
    } else {
        // cost-priority mode, or mean-only with no nominally feasible design
        choice.index = best_any;
        choice.nominal = best_any_res;
        choice.nominal_feasible =
            best_any_res.service_ok && best_any_res.hold_ok;
    }
    return choice;
}

MethodMetrics method_metrics(const std::string& name, const std::string& design_label,
                             const std::vector<EvaluationResult>& results,
                             const RiskConfig& config) {
    if (results.empty()) throw ValidationError("method metrics need at least one result");
    MethodMetrics m;
    m.name = name;
    m.design_label = design_label;
    const std::size_t B = results.size();
    std::vector<double> costs(B), arrivals(B), delays(B);
    for (std::size_t b = 0; b < B; ++b) {
        costs[b] = results[b].total_cost;
        arrivals[b] = results[b].max_arrival;
        delays[b] = results[b].max_hub_delay;
        m.expected_cost += costs[b];
        m.mean_max_arrival += arrivals[b];
        m.mean_max_hub_delay += delays[b];
    }
    m.expected_cost /= static_cast<double>(B);
    m.mean_max_arrival /= static_cast<double>(B);
    m.mean_max_hub_delay /= static_cast<double>(B);
    m.p95_cost = order_quantile(costs, 0.95);
    m.p95_max_arrival = order_quantile(arrivals, 0.95);
    m.cvar_max_arrival = empirical_cvar(arrivals, config.alpha);
    m.service_reliability = reliability(arrivals, config.service_target);
    m.hold_reliability = reliability(delays, config.hold_limit);
    return m;
}

ComparisonGains compute_gains(const MethodMetrics& focal, const MethodMetrics& baseline) {
    ComparisonGains g;
    g.cvar_reduction_pct =
        (baseline.cvar_max_arrival - focal.cvar_max_arrival) / baseline.cvar_max_arrival * 100.0;
    g.p95_reduction_pct =
        (baseline.p95_max_arrival - focal.p95_max_arrival) / baseline.p95_max_arrival * 100.0;
    g.service_gain_pp = (focal.service_reliability - baseline.service_reliability) * 100.0;
    g.hold_gain_pp = (focal.hold_reliability - baseline.hold_reliability) * 100.0;
    g.cost_premium_pct =
        (focal.expected_cost - baseline.expected_cost) / baseline.expected_cost * 100.0;
    return g;
}

ComparisonReport compare_designs(
    const std::vector<std::pair<std::string, const Design*>>& designs,
    const NetworkData& network, const std::vector<Scenario>& scenarios,
    const CostParams& params, const RiskConfig& config, std::size_t baseline,
    std::size_t focal, int threads) {
    if (designs.size() < 2) throw ValidationError("comparison needs at least two designs");
    if (scenarios.empty()) throw ValidationError("comparison needs a shared scenario list");
    if (baseline >= designs.size() || focal >= designs.size())
        throw ValidationError("baseline/focal index out of range");

    ComparisonReport report;
    report.baseline = baseline;
    report.focal = focal;
    for (const auto& [name, design] : designs) {
        const auto results =
            evaluate_batch(*design, network, scenarios, params, config.thresholds(), threads);
        report.methods.push_back(method_metrics(name, design->label, results, config));
    }
    report.gains = compute_gains(report.methods[focal], report.methods[baseline]);
    return report;
}

std::vector<SensitivityRow> sensitivity_grid(const std::vector<DesignSummary>& summaries,
                                             const std::vector<RiskWeights>& weight_rows,
                                             const RiskConfig& base_config,
                                             const Normalizers& normalizers) {
    if (weight_rows.empty()) throw ValidationError("sensitivity grid must be nonempty");
    std::vector<SensitivityRow> rows;
    rows.reserve(weight_rows.size());
    std::vector<DesignSummary> rescored = summaries;
    for (const RiskWeights& w : weight_rows) {
        RiskConfig cfg = base_config;
        cfg.weights = w;
        for (std::size_t i = 0; i < rescored.size(); ++i) {
            rescored[i] = summaries[i];
            rescore(rescored[i], cfg, normalizers);
        }
        const SelectionResult sel = select_best(rescored);
        const DesignSummary& s = rescored[sel.best];
        rows.push_back({w, s.label, s.score, s.mean_cost, s.cvar_max_arrival,
                        s.service_reliability, s.hold_reliability});
    }
    return rows;
}

std::vector<RiskWeights> sim_weight_rows() {
    // (cost, time) pairs stepping 0.10 with emission = 1 - cost - time >= 0.10;
    // the first 20 rows of that grid.
    std::vector<RiskWeights> rows;
    for (double wc = 0.15; wc <= 0.46 && rows.size() < 20; wc += 0.10) {
        for (double wt = 0.15; rows.size() < 20; wt += 0.10) {
            const double we = 1.0 - wc - wt;
            if (we < 0.0999999) break;
            RiskWeights w;
            w.cost = wc;
            w.time = wt;
            w.emission = we;
            rows.push_back(w);
        }
    }
    return rows;
}

std::vector<std::pair<std::string, RiskWeights>> cab_weight_profiles() {
    return {
        {"cost_dominant", {0.70, 0.20, 0.04, 0.03, 0.03}},
        {"balanced_cost_risk", {0.55, 0.30, 0.05, 0.05, 0.05}},
        {"tail_risk_aware", {0.42, 0.38, 0.05, 0.08, 0.07}},
        {"reliability_dominant", {0.30, 0.42, 0.05, 0.13, 0.10}},
        {"time_critical", {0.25, 0.50, 0.05, 0.10, 0.10}},
    };
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TheoremReport theorem_harness(std::uint64_t seed, const std::vector<int>& sizes,
                              int cvar_seeds, int argmin_B, int argmin_replications,
                              double risk_gap, double lognormal_sigma) {
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw ValidationError("sizes must be increasing");

    TheoremReport report;
    report.sample_sizes = sizes;

    // CVaR consistency on a fixed lognormal(0,1) generator, alpha = 0.9:
    // reference CVaR from an independent 4096-sample draw per seed.
    const double alpha = 0.90;
    const int ref_size = 4096;
    for (int B : sizes) {
        std::vector<double> errors(cvar_seeds);
        for (int s = 0; s < cvar_seeds; ++s) {
            Substream ref_stream(seed, static_cast<std::uint64_t>(s), Substream::kGeneric, 0);
            std::vector<double> ref(ref_size);
            for (auto& y : ref) y = ref_stream.lognormal(0.0, lognormal_sigma);
            Substream stream(seed, static_cast<std::uint64_t>(s), Substream::kGeneric,
                             1 + static_cast<std::uint64_t>(B));
            std::vector<double> sample(B);
            for (auto& y : sample) y = stream.lognormal(0.0, lognormal_sigma);
            errors[s] = std::fabs(empirical_cvar(sample, alpha) - empirical_cvar(ref, alpha));
        }
        report.median_abs_error.push_back(median(errors));
    }
    report.cvar_errors_decreasing = true;
    const bool degenerate = lognormal_sigma == 0.0;
    for (std::size_t i = 1; i < report.median_abs_error.size(); ++i) {
        if (degenerate) {
            if (report.median_abs_error[i] != 0.0) report.cvar_errors_decreasing = false;
        } else if (report.median_abs_error[i] >= report.median_abs_error[i - 1]) {
            report.cvar_errors_decreasing = false;
        }
    }

    // Argmin consistency: two synthetic designs with normal losses shifted
    // by `risk_gap`, risk = 0.5 mean + 0.5 CVaR_0.9, selection by empirical
    // risk over argmin_B scenarios per replication.
    int correct = 0;
    for (int rep = 0; rep < argmin_replications; ++rep) {
        Substream sa(seed, static_cast<std::uint64_t>(rep), Substream::kGeneric, 100);
        Substream sb(seed, static_cast<std::uint64_t>(rep), Substream::kGeneric, 101);
        std::vector<double> ya(argmin_B), yb(argmin_B);
        for (int b = 0; b < argmin_B; ++b) {
            ya[b] = sa.normal(1.0, 1.0);
            yb[b] = sb.normal(1.0 + risk_gap, 1.0);  // both risk terms shift by the gap
        }
        const double risk_a = 0.5 * std::accumulate(ya.begin(), ya.end(), 0.0) / argmin_B +
                              0.5 * empirical_cvar(ya, alpha);
        const double risk_b = 0.5 * std::accumulate(yb.begin(), yb.end(), 0.0) / argmin_B +
                              0.5 * empirical_cvar(yb, alpha);
        if (risk_a < risk_b) ++correct;
    }
    report.replications = argmin_replications;
    report.selection_frequency =
        static_cast<double>(correct) / static_cast<double>(argmin_replications);
    report.argmin_consistent = report.selection_frequency >= 0.99;
    return report;
}

void export_comparison(const std::string& metrics_path, const std::string& gains_path,
                       const std::string& manifest_ref, const ComparisonReport& report) {
    {
        CsvWriter w(metrics_path, manifest_ref,
                    {"method", "design_label", "expected_cost", "p95_cost", "mean_max_arrival",
                     "p95_max_arrival", "cvar_max_arrival", "service_reliability",
                     "hold_reliability", "mean_max_hub_delay", "is_baseline", "is_focal"});
        for (std::size_t i = 0; i < report.methods.size(); ++i) {
            const MethodMetrics& m = report.methods[i];
            w.cell(m.name).cell(m.design_label).cell(m.expected_cost).cell(m.p95_cost);
            w.cell(m.mean_max_arrival).cell(m.p95_max_arrival).cell(m.cvar_max_arrival);
            w.cell(m.service_reliability).cell(m.hold_reliability).cell(m.mean_max_hub_delay);
            w.cell(i == report.baseline ? 1 : 0).cell(i == report.focal ? 1 : 0);
            w.end_row();
        }
    }
    {
        CsvWriter w(gains_path, manifest_ref, {"metric", "value"});
        w.cell("cvar_max_arrival_reduction_pct").cell(report.gains.cvar_reduction_pct);
        w.end_row();
        w.cell("p95_max_arrival_reduction_pct").cell(report.gains.p95_reduction_pct);
        w.end_row();
        w.cell("service_reliability_gain_pp").cell(report.gains.service_gain_pp);
        w.end_row();
        w.cell("hold_reliability_gain_pp").cell(report.gains.hold_gain_pp);
        w.end_row();
        w.cell("expected_cost_premium_pct").cell(report.gains.cost_premium_pct);
        w.end_row();
    }
}

void export_sensitivity(const std::string& path, const std::string& manifest_ref,
                        const std::vector<SensitivityRow>& rows,
                        const std::vector<std::string>& row_names) {
    CsvWriter w(path, manifest_ref,
                {"profile", "w_cost", "w_time", "w_emission", "w_service", "w_hold",
                 "selected_label", "score", "mean_cost", "cvar_max_arrival",
                 "service_reliability", "hold_reliability"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SensitivityRow& r = rows[i];
        w.cell(i < row_names.size() ? row_names[i] : "row" + std::to_string(i + 1));
        w.cell(r.weights.cost).cell(r.weights.time).cell(r.weights.emission);
        w.cell(r.weights.service).cell(r.weights.hold);
        w.cell(r.selected_label).cell(r.score).cell(r.mean_cost).cell(r.cvar_max_arrival);
        w.cell(r.service_reliability).cell(r.hold_reliability);
        w.end_row();
    }
}

void export_theorem_report(const std::string& path, const std::string& manifest_ref,
                           const TheoremReport& report) {
    CsvWriter w(path, manifest_ref, {"check", "parameter", "value", "pass"});
    for (std::size_t i = 0; i < report.sample_sizes.size(); ++i) {
        w.cell("cvar_consistency_median_abs_error");
        w.cell(std::to_string(report.sample_sizes[i]));
        w.cell_full(report.median_abs_error[i]);
        w.cell(report.cvar_errors_decreasing ? 1 : 0);
        w.end_row();
    }
    w.cell("argmin_selection_frequency").cell(std::to_string(report.replications));
    w.cell_full(report.selection_frequency);
    w.cell(report.argmin_consistent ? 1 : 0);
    w.end_row();
}

}  // namespace netdesign
