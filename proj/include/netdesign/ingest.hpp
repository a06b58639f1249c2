#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/matrix.hpp"

namespace netdesign {

enum class Regime : int { normal = 0, surge = 1, storm = 2 };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct RegimeParams {
    int days = 0;
    double demand_multiplier = 1.0;
    double traveltime_multiplier = 1.0;
    double reliability_shift = 0.0;  // additive shift on logit(p)
};

// Regime-conditional generator settings for panels. Normal days are the
// reference regime (multipliers 1, shift 0).
struct RegimeConfig {
    std::array<RegimeParams, 3> regimes{};  // indexed by Regime
    double cost_sigma = 0.30;               // log-sd of the daily cost multiplier

    int total_days() const;
    const RegimeParams& at(Regime r) const { return regimes[static_cast<int>(r)]; }
    RegimeParams& at(Regime r) { return regimes[static_cast<int>(r)]; }
    void validate() const;

    static RegimeConfig sim_defaults();  // 67/24/9 days
    static RegimeConfig cab_defaults();  // 93/18/9 days of 120
};

// Generator constants shared by the synthetic environment and the CAB
// pseudo-panel; all calibrated repo defaults, overridable via config.
struct PanelGenConfig {
    double speed = 75.0;             // distance units per hour; median tau = d / speed
    double travel_log_sd = 0.30;     // per-arc lognormal sd on normal days
    double reliability_base = 0.88;  // normal-regime hub success probability
    long long reliability_trials = 100;  // Binomial trials per hub-day
};

struct NetworkData {
    int node_count = 0;
    DMatrix distances;       // symmetric, zero diagonal
    DMatrix flows_baseline;  // parcels/day, zero diagonal (scaled)
    std::vector<int> candidate_hubs;  // 0-based indices, ordered
    std::vector<std::string> node_labels;
    double demand_scale = 1.0;  // multiplier applied to the raw flows

    int od_pair_count() const { return node_count * (node_count - 1); }
    void validate() const;
    double mean_offdiag_flow() const;
};

struct ReliabilityObs {
    long long successes = 0;
    long long trials = 0;
};

struct HistoricalPanel {
    int days = 0;
    std::vector<IMatrix> demand;        // per day, n x n, zero diagonal
    std::vector<DMatrix> travel_time;   // per day, n x n, positive off-diagonal
    std::vector<double> cost_multiplier;
    std::vector<std::vector<ReliabilityObs>> hub_reliability;  // per day, per hub
    std::vector<Regime> regimes;

    void validate(int node_count, std::size_t hub_count) const;
};

// Parse a CAB-format benchmark text: optional header tokens, then
// full_n^2 flow values and full_n^2 distance values, whitespace separated.
// Returns the induced subnetwork on `subset` (1-based source labels,
// order-preserving), with flows rescaled so the mean off-diagonal daily
// demand equals target_mean_demand.
NetworkData parse_cab(const std::string& raw_text, const std::vector<int>& subset,
                      double target_mean_demand = 24.0, int full_n = 25);

// Deterministic 9-node synthetic environment with candidate hubs {4,8,3}
// (1-based) and a regime-labelled historical panel.
struct SynthConfig {
    int nodes = 9;
    std::vector<int> candidate_hubs_1based = {4, 8, 3};
    double box_scale = 1200.0;    // coordinates drawn on [0, box_scale]^2
    double demand_base = 9.0;     // base OD intensity (parcels/day)
    double demand_log_sd = 0.50;  // cross-OD heterogeneity of the intensity field
    PanelGenConfig gen;
};

std::pair<NetworkData, HistoricalPanel> synth_environment(std::uint64_t seed,
                                                          const RegimeConfig& regime,
                                                          const SynthConfig& cfg = {});

// Pseudo-historical operational panel around an existing network: demand
// Poisson at (scaled baseline flow x regime multiplier), travel time
// lognormal with median distance/speed, Binomial reliability pseudo-counts.
HistoricalPanel build_pseudo_panel(const NetworkData& network, std::uint64_t seed,
                                   const RegimeConfig& regime, int days,
                                   const PanelGenConfig& gen = {});

// Panel CSV bundle (main OD file plus sidecars), schema documented in the
// README. `stem` is a path prefix: <stem>_od.csv, <stem>_cost.csv,
// <stem>_reliability.csv, <stem>_regimes.csv.
void export_panel(const HistoricalPanel& panel, const std::string& stem,
                  const std::string& manifest_ref);
HistoricalPanel import_panel(const std::string& stem, int node_count,
                             std::size_t hub_count);

}  // namespace netdesign
