#pragma once

#include <string>
#include <vector>

#include "netdesign/designspace.hpp"
#include "netdesign/evaluator.hpp"

namespace netdesign {

struct RiskWeights {
    double cost = 0.25;      // omega_c
    double time = 0.55;      // omega_t
    double emission = 0.20;  // omega_e
    double service = 0.50;   // lambda_s
    double hold = 0.50;      // lambda_h
};

struct RiskConfig {
    double alpha = 0.90;           // CVaR level
    double service_target = 42.0;  // T*, hours
    double hold_limit = 8.0;       // d_t, hours
    double service_tolerance = 0.10;  // eps_T
    double hold_tolerance = 0.10;     // eps_k
    RiskWeights weights;

    void validate() const;
    Thresholds thresholds() const { return {service_target, hold_limit}; }
};

struct MinMax {
    double lo = 0.0;
    double hi = 1.0;
};

// Min-max constants computed once over the candidate set of an experiment
// and reused verbatim in stress comparisons.
struct Normalizers {
    MinMax cost;
    MinMax cvar;
    MinMax emission;
};

struct DesignSummary {
    std::string label;
    Topology topology = Topology::FC;
    double mean_cost = 0.0;
    double p95_cost = 0.0;
    double mean_max_arrival = 0.0;
    double p95_max_arrival = 0.0;
    double cvar_max_arrival = 0.0;
    double service_reliability = 0.0;  // p_s
    double hold_reliability = 0.0;     // p_h
    double mean_emission = 0.0;
    double score = 0.0;
    bool feasible_service = false;  // p_s >= 1 - eps_T
    bool feasible_hold = false;     // p_h >= 1 - eps_k
};

// Rockafellar-Uryasev empirical CVaR in closed form: zeta* is the
// ceil(alpha*B) order statistic; the value adds the mean excess above it
// scaled by 1/((1-alpha)B).
double empirical_cvar(const std::vector<double>& samples, double alpha);

// Fraction of samples <= threshold.
double reliability(const std::vector<double>& samples, double threshold);

// Upper order-statistic quantile (1-based ceil(q*B) convention, matching
// the CVaR threshold).
double order_quantile(const std::vector<double>& samples, double q);

// (x - lo)/(hi - lo); a degenerate range normalizes to 0.
double normalize(double x, const MinMax& mm);

Normalizers compute_normalizers(const std::vector<DesignSummary>& summaries);

DesignSummary summarize_design(const std::string& label, Topology topology,
                               const std::vector<EvaluationResult>& results,
                               const RiskConfig& config, const Normalizers& normalizers);

// Re-derives only the score and feasibility flags; used by the
// preference-weight sensitivity grid so evaluations are never repeated.
void rescore(DesignSummary& summary, const RiskConfig& config, const Normalizers& normalizers);

// Non-dominated set under (mean_cost, cvar_max_arrival), minimizing both;
// survivors keep their input order.
std::vector<std::size_t> pareto_front_indices(const std::vector<DesignSummary>& summaries);
std::vector<DesignSummary> pareto_front(const std::vector<DesignSummary>& summaries);

struct ScenarioBestEntry {
    std::string label;
    double probability = 0.0;
    int wins = 0;
    double mean_loss = 0.0;
};

// Posterior probability that each entrant is scenario-best under the
// within-scenario min-max normalized loss; all entrants must be evaluated
// on the identical scenario list.
std::vector<ScenarioBestEntry> scenario_best_probabilities(
    const std::vector<std::pair<std::string, std::vector<EvaluationResult>>>& entrants,
    const RiskConfig& config);

struct SelectionResult {
    std::size_t best = 0;               // index into the summaries argument
    std::vector<std::size_t> ranking;   // all indices, best first
};

// Feasible-first argmin of the Bayes-risk score: designs satisfying both
// chance constraints rank before the rest, then ascending score, then
// lexicographic label.
SelectionResult select_best(const std::vector<DesignSummary>& summaries);

void export_summaries(const std::string& path, const std::string& manifest_ref,
                      const std::vector<DesignSummary>& summaries,
                      const std::vector<std::size_t>* ranking = nullptr);

}  // namespace netdesign
