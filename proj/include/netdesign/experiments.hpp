#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/evaluator.hpp"
#include "netdesign/posterior.hpp"
#include "netdesign/riskengine.hpp"

namespace netdesign {

struct StressConfig {
    double amplification = 1.22;        // demand factor
    double disruption_prob = 0.26;      // per-arc disruption probability
    double disruption_time_factor = 1.8;
    int count = 180;
    std::uint64_t seed = 1;

    void validate() const;
};

// Future stress scenarios: fresh posterior-predictive draws (the caller
// supplies a seed independent of the training stream), demand scaled by
// `amplification` and rounded, and each arc independently disrupted with
// probability `disruption_prob` (travel time multiplied by the disruption
// factor).
std::vector<Scenario> stress_scenarios(const PosteriorState& state, const StressConfig& cfg);

enum class BaselineMode {
    mean_only,      // min nominal cost among nominal-threshold-feasible designs
    cost_priority,  // global min nominal cost, thresholds ignored
};

// Nominal scenario built from posterior point summaries: rounded mean
// demand, median travel times, mean reliability, plug-in mean cost
// multiplier.
Scenario nominal_scenario(const PosteriorState& state);

struct BaselineChoice {
    std::size_t index = 0;
    EvaluationResult nominal;
    bool nominal_feasible = false;
};

BaselineChoice deterministic_baseline(const std::vector<Design>& candidates,
                                      const NetworkData& network, const PosteriorState& state,
                                      const CostParams& params, const Thresholds& thresholds,
                                      BaselineMode mode);

struct MethodMetrics {
    std::string name;
    std::string design_label;
    double expected_cost = 0.0;
    double p95_cost = 0.0;
    double mean_max_arrival = 0.0;
    double p95_max_arrival = 0.0;
    double cvar_max_arrival = 0.0;
    double service_reliability = 0.0;
    double hold_reliability = 0.0;
    double mean_max_hub_delay = 0.0;
};

struct ComparisonGains {
    double cvar_reduction_pct = 0.0;    // (base - new)/base * 100
    double p95_reduction_pct = 0.0;     // (base - new)/base * 100
    double service_gain_pp = 0.0;       // (new - base) * 100
    double hold_gain_pp = 0.0;          // (new - base) * 100
    double cost_premium_pct = 0.0;      // (new - base)/base * 100
};

struct ComparisonReport {
    std::vector<MethodMetrics> methods;
    std::size_t baseline = 0;  // index into methods
    std::size_t focal = 0;     // the method the gains describe
    ComparisonGains gains;
};

MethodMetrics method_metrics(const std::string& name, const std::string& design_label,
                             const std::vector<EvaluationResult>& results,
                             const RiskConfig& config);

ComparisonGains compute_gains(const MethodMetrics& focal, const MethodMetrics& baseline);

// Evaluates every named design on the identical scenario list and reports
// the stress metric table plus gains of methods[focal] over
// methods[baseline].
ComparisonReport compare_designs(
    const std::vector<std::pair<std::string, const Design*>>& designs,
    const NetworkData& network, const std::vector<Scenario>& scenarios,
    const CostParams& params, const RiskConfig& config, std::size_t baseline,
    std::size_t focal, int threads = 1);

struct SensitivityRow {
    RiskWeights weights;
    std::string selected_label;
    double score = 0.0;
    double mean_cost = 0.0;
    double cvar_max_arrival = 0.0;
    double service_reliability = 0.0;
    double hold_reliability = 0.0;
};

// Re-scores cached summaries under each weight row; never re-evaluates
// scenarios.
std::vector<SensitivityRow> sensitivity_grid(const std::vector<DesignSummary>& summaries,
                                             const std::vector<RiskWeights>& weight_rows,
                                             const RiskConfig& base_config,
                                             const Normalizers& normalizers);

// The 20-row simulation weight grid over (cost, time, emission) profiles.
std::vector<RiskWeights> sim_weight_rows();
// The five named CAB preference profiles.
std::vector<std::pair<std::string, RiskWeights>> cab_weight_profiles();

struct TheoremReport {
    // CVaR consistency: median |CVaR_B - CVaR_ref| per B over seeds.
    std::vector<int> sample_sizes;
    std::vector<double> median_abs_error;
    bool cvar_errors_decreasing = false;
    // Argmin consistency under a strict risk gap.
    double selection_frequency = 0.0;
    int replications = 0;
    bool argmin_consistent = false;  // frequency >= 0.99
};

// Statistical validation of the CVaR-consistency lemma and the
// argmin-consistency theorem. lognormal_sigma = 0 degenerates the loss
// generator to a constant, for which every CVaR error is identically 0.
TheoremReport theorem_harness(std::uint64_t seed, const std::vector<int>& sizes,
                              int cvar_seeds, int argmin_B, int argmin_replications,
                              double risk_gap, double lognormal_sigma = 1.0);

void export_comparison(const std::string& metrics_path, const std::string& gains_path,
                       const std::string& manifest_ref, const ComparisonReport& report);
void export_sensitivity(const std::string& path, const std::string& manifest_ref,
                        const std::vector<SensitivityRow>& rows,
                        const std::vector<std::string>& row_names = {});
void export_theorem_report(const std::string& path, const std::string& manifest_ref,
                           const TheoremReport& report);

}  // namespace netdesign
