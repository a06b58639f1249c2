#include "netdesign/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

double PosteriorState::total_mean_demand() const {
    double total = 0.0;
    for (int i = 0; i < node_count; ++i)
        for (int j = 0; j < node_count; ++j)
            if (i != j) total += demand(i, j).mean();
    return total;
}

GammaPosterior fit_gamma_poisson(const GammaPosterior& prior,
                                 const std::vector<long long>& observations) {
    if (prior.shape <= 0.0 || prior.rate <= 0.0)
        throw ValidationError("gamma prior parameters must be positive");
    long long sum = 0;
    for (long long x : observations) {
        if (x < 0) throw ValidationError("poisson observations must be nonnegative");
        sum += x;
    }
    return {prior.shape + static_cast<double>(sum),
            prior.rate + static_cast<double>(observations.size())};
}

Matrix<GammaPosterior> fit_demand(const HistoricalPanel& panel,
                                  const Matrix<GammaPosterior>& prior) {
    const std::size_t n = prior.rows();
    Matrix<GammaPosterior> post(n, n);
    std::vector<long long> obs(panel.days);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            for (int t = 0; t < panel.days; ++t) obs[t] = panel.demand[t](i, j);
            post(i, j) = fit_gamma_poisson(prior(i, j), obs);
        }
    }
    return post;
}

NIGPosterior fit_lognormal(const std::vector<double>& observations,
                           const NIGPosterior& prior) {
    if (prior.kappa <= 0.0 || prior.alpha <= 0.0 || prior.beta <= 0.0)
        throw ValidationError("NIG prior parameters must be positive");
    if (observations.empty()) return prior;

    const double n = static_cast<double>(observations.size());
    double sum = 0.0;
    std::vector<double> logs(observations.size());
    for (std::size_t k = 0; k < observations.size(); ++k) {
        if (observations[k] <= 0.0)
            throw ValidationError("lognormal observations must be positive");
        logs[k] = std::log(observations[k]);
        sum += logs[k];
    }
    const double ybar = sum / n;
    double ss = 0.0;
    for (double y : logs) ss += (y - ybar) * (y - ybar);

    NIGPosterior post;
    post.location = (prior.kappa * prior.location + n * ybar) / (prior.kappa + n);
    post.kappa = prior.kappa + n;
    post.alpha = prior.alpha + n / 2.0;
    post.beta = prior.beta + 0.5 * ss +
                prior.kappa * n * (ybar - prior.location) * (ybar - prior.location) /
                    (2.0 * (prior.kappa + n));
    return post;
}

std::vector<BetaPosterior> fit_reliability(const HistoricalPanel& panel,
                                           const std::vector<BetaPosterior>& prior) {
    std::vector<BetaPosterior> post(prior.size());
    for (std::size_t h = 0; h < prior.size(); ++h) {
        if (prior[h].alpha <= 0.0 || prior[h].beta <= 0.0)
            throw ValidationError("beta prior parameters must be positive");
        long long s = 0, f = 0;
        for (int t = 0; t < panel.days; ++t) {
            const auto& obs = panel.hub_reliability[t][h];
            if (obs.successes > obs.trials)
                throw ValidationError("reliability successes exceed trials");
            s += obs.successes;
            f += obs.trials - obs.successes;
        }
        post[h] = {prior[h].alpha + static_cast<double>(s),
                   prior[h].beta + static_cast<double>(f)};
    }
    return post;
}

PosteriorState fit_posterior(const NetworkData& network, const HistoricalPanel& panel,
                             const PosteriorPriors& priors) {
    panel.validate(network.node_count, network.candidate_hubs.size());
    const int n = network.node_count;

    PosteriorState state;
    state.node_count = n;

    Matrix<GammaPosterior> demand_prior(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                demand_prior(i, j) = {
                    std::max(priors.demand_c0 * network.flows_baseline(i, j),
                             priors.demand_shape_floor),
                    priors.demand_c0};
    state.demand = fit_demand(panel, demand_prior);

    state.traveltime = Matrix<NIGPosterior>(n, n);
    std::vector<double> obs(panel.days);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            NIGPosterior prior{std::log(network.distances(i, j) / priors.speed),
                               priors.nig_kappa0, priors.nig_alpha0, priors.nig_beta0};
            for (int t = 0; t < panel.days; ++t) obs[t] = panel.travel_time[t](i, j);
            state.traveltime(i, j) = fit_lognormal(obs, prior);
        }
    }

    std::vector<BetaPosterior> rel_prior(network.candidate_hubs.size(),
                                         {priors.beta_alpha0, priors.beta_beta0});
    state.hub_reliability = fit_reliability(panel, rel_prior);

    NIGPosterior cost_prior{0.0, priors.nig_kappa0, priors.nig_alpha0, priors.nig_beta0};
    state.cost = fit_lognormal(panel.cost_multiplier, cost_prior);
    return state;
}

namespace {

// Draw (mu, sigma^2) from the NIG, then one lognormal observation:
// the exact composition route to the log-t posterior predictive.
double predictive_lognormal(Substream& rng, const NIGPosterior& p) {
    const double sigma2 = rng.inverse_gamma(p.alpha, p.beta);
    const double mu = rng.normal(p.location, std::sqrt(sigma2 / p.kappa));
    return rng.lognormal(mu, std::sqrt(sigma2));
}

}  // namespace

std::vector<Scenario> sample_scenarios(const PosteriorState& state, int B,
                                       std::uint64_t seed) {
    if (B <= 0) throw ValidationError("scenario count B must be positive");
    const int n = state.node_count;
    std::vector<Scenario> out(B);
    for (int b = 0; b < B; ++b) {
        Scenario& sc = out[b];
        sc.scenario_id = b;
        sc.demand = IMatrix::square(n);
        sc.travel_time = DMatrix::square(n);

        Substream ds(seed, static_cast<std::uint64_t>(b), Substream::kDemand);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const auto& g = state.demand(i, j);
                sc.demand(i, j) = ds.poisson(ds.gamma(g.shape, g.rate));
            }

        Substream ts(seed, static_cast<std::uint64_t>(b), Substream::kTravelTime);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) sc.travel_time(i, j) = predictive_lognormal(ts, state.traveltime(i, j));

        Substream rs(seed, static_cast<std::uint64_t>(b), Substream::kReliability);
        sc.hub_reliability.resize(state.hub_reliability.size());
        for (std::size_t h = 0; h < state.hub_reliability.size(); ++h) {
            const auto& bp = state.hub_reliability[h];
            sc.hub_reliability[h] =
                std::clamp(rs.beta(bp.alpha, bp.beta), kReliabilityClamp, 1.0);
        }

        Substream cs(seed, static_cast<std::uint64_t>(b), Substream::kCost);
        sc.cost_multiplier = predictive_lognormal(cs, state.cost);
    }
    return out;
}

PosteriorSummary posterior_summary(const PosteriorState& state) {
    PosteriorSummary s;
    const int n = state.node_count;
    const double pairs = static_cast<double>(n) * (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            s.mean_daily_od_intensity += state.demand(i, j).mean();
            s.mean_log_travel_time += state.traveltime(i, j).location;
        }
    if (pairs > 0) {
        s.mean_daily_od_intensity /= pairs;
        s.mean_log_travel_time /= pairs;
    }
    for (const auto& bp : state.hub_reliability) s.mean_hub_reliability += bp.mean();
    if (!state.hub_reliability.empty())
        s.mean_hub_reliability /= static_cast<double>(state.hub_reliability.size());
    s.mean_log_cost_multiplier = state.cost.location;
    return s;
}

void export_posterior(const PosteriorState& state, const std::string& stem,
                      const std::string& manifest_ref) {
    {
        CsvWriter w(stem + "_demand.csv", manifest_ref, {"origin", "destination", "shape", "rate"});
        for (int i = 0; i < state.node_count; ++i)
            for (int j = 0; j < state.node_count; ++j) {
                if (i == j) continue;
                w.cell(i).cell(j);
                w.cell_full(state.demand(i, j).shape).cell_full(state.demand(i, j).rate);
                w.end_row();
            }
    }
    {
        CsvWriter w(stem + "_traveltime.csv", manifest_ref,
                    {"origin", "destination", "location", "kappa", "alpha", "beta"});
        for (int i = 0; i < state.node_count; ++i)
            for (int j = 0; j < state.node_count; ++j) {
                if (i == j) continue;
                const auto& p = state.traveltime(i, j);
                w.cell(i).cell(j);
                w.cell_full(p.location).cell_full(p.kappa).cell_full(p.alpha).cell_full(p.beta);
                w.end_row();
            }
    }
    {
        CsvWriter w(stem + "_reliability.csv", manifest_ref, {"hub", "alpha", "beta"});
        for (std::size_t h = 0; h < state.hub_reliability.size(); ++h) {
            w.cell(h);
            w.cell_full(state.hub_reliability[h].alpha).cell_full(state.hub_reliability[h].beta);
            w.end_row();
        }
    }
    {
        CsvWriter w(stem + "_cost.csv", manifest_ref, {"location", "kappa", "alpha", "beta"});
        w.cell_full(state.cost.location).cell_full(state.cost.kappa);
        w.cell_full(state.cost.alpha).cell_full(state.cost.beta);
        w.end_row();
    }
}

}  // namespace netdesign
