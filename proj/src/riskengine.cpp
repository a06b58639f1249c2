#include "netdesign/riskengine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"

namespace netdesign {

void RiskConfig::validate() const {
    if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("alpha must lie in (0,1)");
    if (service_target <= 0.0 || hold_limit <= 0.0)
        throw ValidationError("thresholds must be positive");
    if (service_tolerance < 0.0 || service_tolerance >= 1.0 || hold_tolerance < 0.0 ||
        hold_tolerance >= 1.0)
        throw ValidationError("tolerances must lie in [0,1)");
    if (weights.cost < 0 || weights.time < 0 || weights.emission < 0 || weights.service < 0 ||
        weights.hold < 0)
        throw ValidationError("weights must be nonnegative");
}

double empirical_cvar(const std::vector<double>& samples, double alpha) {
    if (samples.empty()) throw ValidationError("CVaR of an empty sample set");
    if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("alpha must lie in (0,1)");
    std::vector<double> s(samples);
    std::sort(s.begin(), s.end());
    const std::size_t B = s.size();
    auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(B) - 1e-12));
    k = std::max<std::size_t>(1, std::min(k, B));
    const double zeta = s[k - 1];
    double excess = 0.0;
    for (std::size_t i = k; i < B; ++i) excess += s[i] - zeta;
    return zeta + excess / ((1.0 - alpha) * static_cast<double>(B));
}

double reliability(const std::vector<double>& samples, double threshold) {
    if (samples.empty()) throw ValidationError("reliability of an empty sample set");
    std::size_t below = 0;
    for (double v : samples)
        if (v <= threshold) ++below;
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

double order_quantile(const std::vector<double>& samples, double q) {
    if (samples.empty()) throw ValidationError("quantile of an empty sample set");
    std::vector<double> s(samples);
    std::sort(s.begin(), s.end());
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.size()) - 1e-12));
    k = std::max<std::size_t>(1, std::min(k, s.size()));
    return s[k - 1];
}

double normalize(double x, const MinMax& mm) {
    if (mm.hi <= mm.lo) return 0.0;
    return (x - mm.lo) / (mm.hi - mm.lo);
}

Normalizers compute_normalizers(const std::vector<DesignSummary>& summaries) {
    Normalizers nz;
    if (summaries.empty()) return nz;
    nz.cost = {summaries[0].mean_cost, summaries[0].mean_cost};
    nz.cvar = {summaries[0].cvar_max_arrival, summaries[0].cvar_max_arrival};
    nz.emission = {summaries[0].mean_emission, summaries[0].mean_emission};
    for (const auto& s : summaries) {
        nz.cost.lo = std::min(nz.cost.lo, s.mean_cost);
        nz.cost.hi = std::max(nz.cost.hi, s.mean_cost);
        nz.cvar.lo = std::min(nz.cvar.lo, s.cvar_max_arrival);
        nz.cvar.hi = std::max(nz.cvar.hi, s.cvar_max_arrival);
        nz.emission.lo = std::min(nz.emission.lo, s.mean_emission);
        nz.emission.hi = std::max(nz.emission.hi, s.mean_emission);
    }
    return nz;
}

void rescore(DesignSummary& s, const RiskConfig& config, const Normalizers& nz) {
    const RiskWeights& w = config.weights;
    s.score = w.cost * normalize(s.mean_cost, nz.cost) +
              w.time * normalize(s.cvar_max_arrival, nz.cvar) +
              w.emission * normalize(s.mean_emission, nz.emission) +
              w.service * (1.0 - s.service_reliability) + w.hold * (1.0 - s.hold_reliability);
    s.feasible_service = s.service_reliability >= 1.0 - config.service_tolerance;
    s.feasible_hold = s.hold_reliability >= 1.0 - config.hold_tolerance;
}

DesignSummary summarize_design(const std::string& label, Topology topology,
                               const std::vector<EvaluationResult>& results,
                               const RiskConfig& config, const Normalizers& normalizers) {
    if (results.empty()) throw ValidationError("summarize_design needs at least one result");
    config.validate();

    const std::size_t B = results.size();
    std::vector<double> costs(B), arrivals(B), delays(B);
    DesignSummary s;
    s.label = label;
    s.topology = topology;
    for (std::size_t b = 0; b < B; ++b) {
        costs[b] = results[b].total_cost;
        arrivals[b] = results[b].max_arrival;
        delays[b] = results[b].max_hub_delay;
        s.mean_cost += results[b].total_cost;
        s.mean_max_arrival += results[b].max_arrival;
        s.mean_emission += results[b].emission;
    }
    s.mean_cost /= static_cast<double>(B);
    s.mean_max_arrival /= static_cast<double>(B);
    s.mean_emission /= static_cast<double>(B);
    s.p95_cost = order_quantile(costs, 0.95);
    s.p95_max_arrival = order_quantile(arrivals, 0.95);
    s.cvar_max_arrival = empirical_cvar(arrivals, config.alpha);
    s.service_reliability = reliability(arrivals, config.service_target);
    s.hold_reliability = reliability(delays, config.hold_limit);
    rescore(s, config, normalizers);
    return s;
}

std::vector<std::size_t> pareto_front_indices(const std::vector<DesignSummary>& summaries) {
    const std::size_t n = summaries.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (summaries[a].mean_cost != summaries[b].mean_cost)
            return summaries[a].mean_cost < summaries[b].mean_cost;
        if (summaries[a].cvar_max_arrival != summaries[b].cvar_max_arrival)
            return summaries[a].cvar_max_arrival < summaries[b].cvar_max_arrival;
        return a < b;
    });

    std::vector<char> dominated(n, 0);
    double best_prev = std::numeric_limits<double>::infinity();  // min cvar at strictly lower cost
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double group_min = std::numeric_limits<double>::infinity();
        while (j < n && summaries[order[j]].mean_cost == summaries[order[i]].mean_cost) {
            group_min = std::min(group_min, summaries[order[j]].cvar_max_arrival);
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) {
            const double v = summaries[order[k]].cvar_max_arrival;
            if (best_prev <= v || v > group_min) dominated[order[k]] = 1;
        }
        best_prev = std::min(best_prev, group_min);
        i = j;
    }

    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < n; ++k)
        if (!dominated[k]) keep.push_back(k);
    return keep;
}

std::vector<DesignSummary> pareto_front(const std::vector<DesignSummary>& summaries) {
    std::vector<DesignSummary> out;
    for (std::size_t k : pareto_front_indices(summaries)) out.push_back(summaries[k]);
    return out;
}

std::vector<ScenarioBestEntry> scenario_best_probabilities(
    const std::vector<std::pair<std::string, std::vector<EvaluationResult>>>& entrants,
    const RiskConfig& config) {
    if (entrants.empty()) throw ValidationError("scenario_best needs at least one entrant");
    const std::size_t B = entrants[0].second.size();
    if (B == 0) throw ValidationError("scenario_best needs at least one scenario");
    for (const auto& [label, results] : entrants) {
        if (results.size() != B)
            throw ValidationError("entrants evaluated on different scenario lists");
        for (std::size_t b = 0; b < B; ++b)
            if (results[b].scenario_id != entrants[0].second[b].scenario_id)
                throw ValidationError("entrants evaluated on different scenario lists");
    }

    const std::size_t m = entrants.size();
    std::vector<ScenarioBestEntry> out(m);
    for (std::size_t e = 0; e < m; ++e) out[e].label = entrants[e].first;

    const RiskWeights& w = config.weights;
    std::vector<double> loss(m);
    for (std::size_t b = 0; b < B; ++b) {
        MinMax cost{entrants[0].second[b].total_cost, entrants[0].second[b].total_cost};
        MinMax arr{entrants[0].second[b].max_arrival, entrants[0].second[b].max_arrival};
        MinMax emi{entrants[0].second[b].emission, entrants[0].second[b].emission};
        for (const auto& [label, results] : entrants) {
            cost.lo = std::min(cost.lo, results[b].total_cost);
            cost.hi = std::max(cost.hi, results[b].total_cost);
            arr.lo = std::min(arr.lo, results[b].max_arrival);
            arr.hi = std::max(arr.hi, results[b].max_arrival);
            emi.lo = std::min(emi.lo, results[b].emission);
            emi.hi = std::max(emi.hi, results[b].emission);
        }
        std::size_t winner = 0;
        for (std::size_t e = 0; e < m; ++e) {
            const EvaluationResult& r = entrants[e].second[b];
            loss[e] = w.cost * normalize(r.total_cost, cost) +
                      w.time * normalize(r.max_arrival, arr) +
                      w.emission * normalize(r.emission, emi) +
                      w.service * (r.max_arrival > config.service_target ? 1.0 : 0.0) +
                      w.hold * (r.max_hub_delay > config.hold_limit ? 1.0 : 0.0);
            out[e].mean_loss += loss[e];
            if (e > 0 && (loss[e] < loss[winner] ||
                          (loss[e] == loss[winner] && out[e].label < out[winner].label)))
                winner = e;
        }
        ++out[winner].wins;
    }
    for (std::size_t e = 0; e < m; ++e) {
        out[e].probability = static_cast<double>(out[e].wins) / static_cast<double>(B);
        out[e].mean_loss /= static_cast<double>(B);
    }
    return out;
}

SelectionResult select_best(const std::vector<DesignSummary>& summaries) {
    if (summaries.empty()) throw ValidationError("select_best needs at least one summary");
    SelectionResult res;
    res.ranking.resize(summaries.size());
    std::iota(res.ranking.begin(), res.ranking.end(), 0);
    std::sort(res.ranking.begin(), res.ranking.end(), [&](std::size_t a, std::size_t b) {
        const bool fa = summaries[a].feasible_service && summaries[a].feasible_hold;
        const bool fb = summaries[b].feasible_service && summaries[b].feasible_hold;
        if (fa != fb) return fa;
        if (summaries[a].score != summaries[b].score) return summaries[a].score < summaries[b].score;
        return summaries[a].label < summaries[b].label;
    });
    res.best = res.ranking[0];
    return res;
}

void export_summaries(const std::string& path, const std::string& manifest_ref,
                      const std::vector<DesignSummary>& summaries,
                      const std::vector<std::size_t>* ranking) {
    CsvWriter w(path, manifest_ref,
                {"rank", "label", "topology", "mean_cost", "p95_cost", "mean_max_arrival",
                 "p95_max_arrival", "cvar_max_arrival", "service_reliability",
                 "hold_reliability", "mean_emission", "score", "feasible_service",
                 "feasible_hold"});
    std::vector<std::size_t> order;
    if (ranking) {
        order = *ranking;
    } else {
        order.resize(summaries.size());
        std::iota(order.begin(), order.end(), 0);
    }
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const DesignSummary& s = summaries[order[pos]];
        w.cell(pos + 1).cell(s.label).cell(topology_name(s.topology));
        w.cell(s.mean_cost).cell(s.p95_cost).cell(s.mean_max_arrival).cell(s.p95_max_arrival);
        w.cell(s.cvar_max_arrival).cell(s.service_reliability).cell(s.hold_reliability);
        w.cell(s.mean_emission).cell(s.score);
        w.cell(s.feasible_service ? 1 : 0).cell(s.feasible_hold ? 1 : 0);
        w.end_row();
    }
}

}  // namespace netdesign
