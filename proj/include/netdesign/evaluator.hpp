#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/designspace.hpp"
#include "netdesign/posterior.hpp"

namespace netdesign {

// Cost coefficients, expressed in millions of currency units. Absolute
// levels are calibration constants, not benchmark data; everything is
// overridable through the run config.
struct CostParams {
    double fixed_hub_cost = 0.08;            // F: per opened hub
    double direct_link_open_cost = 0.004;    // F: per opened direct link
    double unit_access_cost = 1.4e-5;        // V: per parcel-distance on spoke legs
    double interhub_discount = 0.7;          // V/E: multiplier on inter-hub legs
    double unit_direct_cost = 3.2e-5;        // V: per parcel-distance on direct legs
    double sorting_cost_per_parcel = 5e-7;   // S: per hub visit
    double capacity_install_cost = 0.003;    // K: per unit of installed e_k
    double local_service_time = 0.5;         // s_i hours, direct routes only
    double emission_rate = 1e-6;             // per parcel-distance

    void validate() const;
};

struct Thresholds {
    double service_target = 42.0;  // T*, hours
    double hold_limit = 8.0;       // d_t, hours
};

struct EvaluationResult {
    int scenario_id = 0;
    double total_cost = 0.0;
    double cost_fixed = 0.0;      // F
    double cost_transport = 0.0;  // V
    double cost_sorting = 0.0;    // S
    double cost_capacity = 0.0;   // K
    double max_arrival = 0.0;     // A, hours
    double max_hub_delay = 0.0;   // max_k H_k, hours
    std::vector<double> hub_loads;
    bool service_ok = true;
    bool hold_ok = true;
    double emission = 0.0;

    bool operator==(const EvaluationResult&) const = default;
};

// Congestion-adjusted sorting time u + gamma*u^2, u = load / (installed *
// reliability).
double hub_delay(double load, double installed, double reliability, double gamma);

struct RouteChoice {
    double arrival = 0.0;
    int first_hub = -1;   // position in design.hubs; -1 on direct routes
    int second_hub = -1;  // equals first_hub on one-hub routes
    bool direct = false;
    double unit_cost = 0.0;          // per-parcel transport cost (before kappa)
    double emission_distance = 0.0;  // per-parcel discounted distance
};

// Minimum-arrival route for one OD pair given realized hub delays; ties
// break toward lower unit cost, then direct before hubbed, then
// lexicographic hub node indices.
RouteChoice route_od(const Design& design, const NetworkData& network,
                     const Scenario& scenario, const std::vector<double>& hub_delays,
                     int origin, int destination, const CostParams& params);

// Two-pass evaluation: provisional zero-delay routing fixes hub loads,
// realized delays are computed once, and a single re-route produces the
// final arrival times, loads and costs.
EvaluationResult evaluate_design(const Design& design, const NetworkData& network,
                                 const Scenario& scenario, const CostParams& params,
                                 const Thresholds& thresholds);

// Element-wise evaluate_design; output order matches the scenario order
// regardless of thread count.
std::vector<EvaluationResult> evaluate_batch(const Design& design,
                                             const NetworkData& network,
                                             const std::vector<Scenario>& scenarios,
                                             const CostParams& params,
                                             const Thresholds& thresholds,
                                             int threads = 1);

// Process-wide count of evaluate_design calls; lets tests observe that
// re-scoring paths reuse cached evaluations.
std::uint64_t evaluation_count();
void reset_evaluation_count();

void export_results(const std::string& path, const std::string& manifest_ref,
                    const std::vector<std::pair<std::string, std::vector<EvaluationResult>>>&
                        per_design_results);

}  // namespace netdesign
