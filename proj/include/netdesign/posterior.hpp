#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/ingest.hpp"
#include "netdesign/matrix.hpp"

namespace netdesign {

// Gamma(shape, rate) over a Poisson intensity.
struct GammaPosterior {
    double shape = 1.0;
    double rate = 1.0;
    double mean() const { return shape / rate; }
};

// Normal-Inverse-Gamma over (mu, sigma^2) of a normal on the log scale:
// sigma^2 ~ InvGamma(alpha, beta), mu | sigma^2 ~ N(location, sigma^2/kappa).
struct NIGPosterior {
    double location = 0.0;
    double kappa = 1.0;
    double alpha = 2.0;
    double beta = 0.5;
};

struct BetaPosterior {
    double alpha = 1.0;
    double beta = 1.0;
    double mean() const { return alpha / (alpha + beta); }
};

struct PosteriorState {
    int node_count = 0;
    Matrix<GammaPosterior> demand;      // n x n, diagonal unused
    Matrix<NIGPosterior> traveltime;    // n x n, diagonal unused
    std::vector<BetaPosterior> hub_reliability;  // per candidate hub
    NIGPosterior cost;

    // Sum of posterior mean intensities over ordered OD pairs; the basis
    // for hub-capacity sizing.
    double total_mean_demand() const;
};

// One posterior-predictive draw of future operating conditions.
struct Scenario {
    IMatrix demand;                       // parcels, zero diagonal
    DMatrix travel_time;                  // hours, positive off-diagonal
    std::vector<double> hub_reliability;  // in (0,1], per candidate hub
    double cost_multiplier = 1.0;
    int scenario_id = 0;
};

constexpr double kReliabilityClamp = 1e-6;

GammaPosterior fit_gamma_poisson(const GammaPosterior& prior,
                                 const std::vector<long long>& observations);

// Per-OD Gamma-Poisson update from panel demand counts.
Matrix<GammaPosterior> fit_demand(const HistoricalPanel& panel,
                                  const Matrix<GammaPosterior>& prior);

// Normal-Inverse-Gamma conjugate update on log(observations).
NIGPosterior fit_lognormal(const std::vector<double>& observations,
                           const NIGPosterior& prior);

// Per-hub Beta-Binomial update from panel success/trial pseudo-counts.
std::vector<BetaPosterior> fit_reliability(const HistoricalPanel& panel,
                                           const std::vector<BetaPosterior>& prior);

struct PosteriorPriors {
    double demand_c0 = 1.0;       // a0 = c0 * scaled baseline flow, b0 = c0
    double demand_shape_floor = 1e-3;
    double nig_kappa0 = 1.0;
    double nig_alpha0 = 2.0;
    double nig_beta0 = 0.5;
    double beta_alpha0 = 8.0;
    double beta_beta0 = 2.0;
    double speed = 75.0;          // sets the distance-implied prior median
};

// Full conjugate fit of all four components from a historical panel.
PosteriorState fit_posterior(const NetworkData& network, const HistoricalPanel& panel,
                             const PosteriorPriors& priors = {});

// B posterior-predictive scenarios; scenario b is drawn from substreams
// keyed (seed, b, variable), so generation order and thread count do not
// affect the result.
std::vector<Scenario> sample_scenarios(const PosteriorState& state, int B,
                                       std::uint64_t seed);

struct PosteriorSummary {
    double mean_daily_od_intensity = 0.0;
    double mean_log_travel_time = 0.0;
    double mean_hub_reliability = 0.0;
    double mean_log_cost_multiplier = 0.0;
};

PosteriorSummary posterior_summary(const PosteriorState& state);

// Audit bundle: one CSV per component under `stem` (see README for the
// schema).
void export_posterior(const PosteriorState& state, const std::string& stem,
                      const std::string& manifest_ref);

}  // namespace netdesign
