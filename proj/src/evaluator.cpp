#include "netdesign/evaluator.hpp"

#include <atomic>
#include <cmath>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/parallel.hpp"

namespace netdesign {

namespace {
std::atomic<std::uint64_t> g_eval_count{0};
}

std::uint64_t evaluation_count() { return g_eval_count.load(std::memory_order_relaxed); }
void reset_evaluation_count() { g_eval_count.store(0, std::memory_order_relaxed); }

void CostParams::validate() const {
    if (fixed_hub_cost < 0 || direct_link_open_cost < 0 || unit_access_cost < 0 ||
        unit_direct_cost < 0 || sorting_cost_per_parcel < 0 || capacity_install_cost < 0 ||
        local_service_time < 0 || emission_rate < 0)
        throw ValidationError("cost parameters must be nonnegative");
    if (interhub_discount <= 0.0 || interhub_discount > 1.0)
        throw ValidationError("interhub discount must lie in (0,1]");
}

double hub_delay(double load, double installed, double reliability, double gamma) {
    if (installed <= 0.0) throw ValidationError("installed capacity must be positive");
    if (reliability <= 0.0 || reliability > 1.0)
        throw ValidationError("reliability must lie in (0,1]");
    const double u = load / (installed * reliability);
    return u + gamma * u * u;
}

RouteChoice route_od(const Design& design, const NetworkData& network,
                     const Scenario& scenario, const std::vector<double>& hub_delays,
                     int origin, int destination, const CostParams& params) {
    const auto& tau = scenario.travel_time;
    const auto& dist = network.distances;

    RouteChoice best;
    bool have = false;

    auto consider = [&](const RouteChoice& cand) {
        if (!have) {
            best = cand;
            have = true;
            return;
        }
        if (cand.arrival != best.arrival) {
            if (cand.arrival < best.arrival) best = cand;
            return;
        }
        if (cand.unit_cost != best.unit_cost) {
            if (cand.unit_cost < best.unit_cost) best = cand;
            return;
        }
        // direct (-1,-1) sorts before any hub pair
        const int ck = cand.direct ? -1 : design.hubs[cand.first_hub];
        const int cl = cand.direct ? -1 : design.hubs[cand.second_hub];
        const int bk = best.direct ? -1 : design.hubs[best.first_hub];
        const int bl = best.direct ? -1 : design.hubs[best.second_hub];
        if (ck < bk || (ck == bk && cl < bl)) best = cand;
    };

    if (design.direct_mask.rows() > 0 && design.direct_mask(origin, destination)) {
        RouteChoice direct;
        direct.direct = true;
        direct.arrival = tau(origin, destination) + params.local_service_time;
        direct.unit_cost = dist(origin, destination) * params.unit_direct_cost;
        direct.emission_distance = dist(origin, destination);
        consider(direct);
    }

    for (int kp : design.allocation[origin]) {
        const int k = design.hubs[kp];
        for (int lp : design.allocation[destination]) {
            const int l = design.hubs[lp];
            RouteChoice cand;
            cand.first_hub = kp;
            cand.second_hub = lp;
            if (kp == lp) {
                // single hub visit, sorted once
                cand.arrival = tau(origin, k) + hub_delays[kp] + tau(k, destination);
                const double d = dist(origin, k) + dist(k, destination);
                cand.unit_cost = d * params.unit_access_cost;
                cand.emission_distance = d;
            } else {
                cand.arrival = tau(origin, k) + hub_delays[kp] + tau(k, l) + hub_delays[lp] +
                               tau(l, destination);
                cand.unit_cost =
                    (dist(origin, k) + dist(l, destination)) * params.unit_access_cost +
                    dist(k, l) * params.unit_access_cost * params.interhub_discount;
                cand.emission_distance = dist(origin, k) + dist(l, destination) +
                                         dist(k, l) * params.interhub_discount;
            }
            consider(cand);
        }
    }

    if (!have)
        throw ValidationError("no admissible route for OD pair " + std::to_string(origin) +
                              "->" + std::to_string(destination));
    return best;
}

EvaluationResult evaluate_design(const Design& design, const NetworkData& network,
                                 const Scenario& scenario, const CostParams& params,
                                 const Thresholds& thresholds) {
    g_eval_count.fetch_add(1, std::memory_order_relaxed);

    const int n = network.node_count;
    const std::size_t nhubs = design.hubs.size();

    // Pass 1: provisional routing at zero hub delay fixes the loads.
    std::vector<double> zero_delays(nhubs, 0.0);
    std::vector<double> loads(nhubs, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || scenario.demand(i, j) == 0) continue;
            const RouteChoice r = route_od(design, network, scenario, zero_delays, i, j, params);
            const double w = static_cast<double>(scenario.demand(i, j));
            if (!r.direct) {
                loads[r.first_hub] += w;
                if (r.second_hub != r.first_hub) loads[r.second_hub] += w;
            }
        }
    }

    std::vector<double> delays(nhubs, 0.0);
    for (std::size_t k = 0; k < nhubs; ++k) {
        const double rel = scenario.hub_reliability[design.hub_candidate_index[k]];
        delays[k] = hub_delay(loads[k], design.hub_capacity[k], rel,
                              design.congestion_gamma[k]);
    }

    // Pass 2: re-route with realized delays; no further iteration.
    EvaluationResult res;
    res.scenario_id = scenario.scenario_id;
    res.hub_loads.assign(nhubs, 0.0);

    double transport = 0.0;
    double emission_dist = 0.0;
    double hub_visits = 0.0;
    double max_arrival = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const RouteChoice r = route_od(design, network, scenario, delays, i, j, params);
            if (r.arrival > max_arrival) max_arrival = r.arrival;
            const double w = static_cast<double>(scenario.demand(i, j));
            if (w == 0.0) continue;
            transport += w * r.unit_cost;
            emission_dist += w * r.emission_distance;
            if (!r.direct) {
                res.hub_loads[r.first_hub] += w;
                hub_visits += w;
                if (r.second_hub != r.first_hub) {
                    res.hub_loads[r.second_hub] += w;
                    hub_visits += w;
                }
            }
        }
    }

    res.cost_fixed = params.fixed_hub_cost * static_cast<double>(nhubs) +
                     params.direct_link_open_cost * static_cast<double>(design.direct_links.size());
    res.cost_transport = scenario.cost_multiplier * transport;
    res.cost_sorting = params.sorting_cost_per_parcel * hub_visits;
    double capacity_sum = 0.0;
    for (double e : design.hub_capacity) capacity_sum += e;
    res.cost_capacity = params.capacity_install_cost * capacity_sum;
    res.total_cost = res.cost_fixed + res.cost_transport + res.cost_sorting + res.cost_capacity;
    res.emission = params.emission_rate * emission_dist;

    res.max_arrival = max_arrival;
    res.max_hub_delay = 0.0;
    for (double h : delays) res.max_hub_delay = std::max(res.max_hub_delay, h);
    res.service_ok = res.max_arrival <= thresholds.service_target;
    res.hold_ok = res.max_hub_delay <= thresholds.hold_limit;
    return res;
}

std::vector<EvaluationResult> evaluate_batch(const Design& design, const NetworkData& network,
                                             const std::vector<Scenario>& scenarios,
                                             const CostParams& params,
                                             const Thresholds& thresholds, int threads) {
    std::vector<EvaluationResult> out(scenarios.size());
    parallel_for(scenarios.size(), threads, [&](std::size_t b) {
        out[b] = evaluate_design(design, network, scenarios[b], params, thresholds);
    });
    return out;
}

void export_results(const std::string& path, const std::string& manifest_ref,
                    const std::vector<std::pair<std::string, std::vector<EvaluationResult>>>&
                        per_design_results) {
    CsvWriter w(path, manifest_ref,
                {"design_label", "scenario_id", "cost", "F", "V", "S", "K", "max_arrival",
                 "max_hub_delay", "service_ok", "hold_ok", "emission"});
    for (const auto& [label, results] : per_design_results) {
        for (const auto& r : results) {
            w.cell(label).cell(r.scenario_id).cell(r.total_cost);
            w.cell(r.cost_fixed).cell(r.cost_transport).cell(r.cost_sorting).cell(r.cost_capacity);
            w.cell(r.max_arrival).cell(r.max_hub_delay);
            w.cell(r.service_ok ? 1 : 0).cell(r.hold_ok ? 1 : 0);
            w.cell(r.emission);
            w.end_row();
        }
    }
}

}  // namespace netdesign
