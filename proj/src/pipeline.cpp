#include "netdesign/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/parallel.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

namespace fs = std::filesystem;

OutputSet::OutputSet(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string OutputSet::path(const std::string& name) {
    const std::string partial = (fs::path(dir_) / (name + ".partial")).string();
    pending_.emplace_back(partial, (fs::path(dir_) / name).string());
    return partial;
}

std::string OutputSet::stem(const std::string& prefix,
                            std::initializer_list<std::string> suffixes) {
    const std::string partial_stem = (fs::path(dir_) / (prefix + ".partial")).string();
    const std::string final_stem = (fs::path(dir_) / prefix).string();
    for (const std::string& s : suffixes)
        pending_.emplace_back(partial_stem + s, final_stem + s);
    return partial_stem;
}

void OutputSet::commit() {
    for (const auto& [partial, final_path] : pending_) fs::rename(partial, final_path);
    pending_.clear();
}

Pipeline::Pipeline(RunConfig config) : cfg(std::move(config)) {
    cfg.validate();
    if (!cfg.stress_seed_set) cfg.stress.seed = derive_seed(cfg.seed, 0x73747265737300ULL);
    if (cfg.experiment == "cab") {
        try {
            input_bytes = read_file(cfg.cab_path);
        } catch (const std::exception& e) {
            throw ValidationError(std::string("cannot read CAB data: ") + e.what());
        }
    }
    manifest_ref = hash_hex(fnv1a64(config_echo_json(cfg) + input_bytes));
}

void Pipeline::prepare_data() {
    if (cfg.experiment == "sim") {
        SynthConfig synth = cfg.synth;
        auto [net, pan] = synth_environment(cfg.seed, cfg.regime, synth);
        network = std::move(net);
        panel = std::move(pan);
    } else {
        network = parse_cab(input_bytes, cfg.cab_subset, cfg.target_mean_demand);
        network.candidate_hubs.clear();
        for (int h1 : cfg.cab_candidate_hubs_1based) {
            if (h1 < 1 || h1 > network.node_count)
                throw ValidationError("candidate hub index out of range: " + std::to_string(h1));
            network.candidate_hubs.push_back(h1 - 1);
        }
        network.validate();
        panel = build_pseudo_panel(network, cfg.seed, cfg.regime, cfg.panel_days,
                                   cfg.synth.gen);
    }
}

void Pipeline::fit() {
    PosteriorPriors priors = cfg.priors;
    priors.speed = cfg.synth.gen.speed;
    posterior = fit_posterior(network, panel, priors);
    post_summary = posterior_summary(posterior);
}

void Pipeline::sample() {
    scenarios = sample_scenarios(posterior, cfg.scenario_count, cfg.seed);
}

void Pipeline::enumerate_all() {
    const int n = network.node_count;
    demand_rank = DMatrix::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                demand_rank(i, j) = posterior.demand(i, j).mean() * network.distances(i, j);
    total_mean_demand = posterior.total_mean_demand();

    designs.clear();
    counts_by_topology.assign(kTopologyCount, 0);
    for (int t = 0; t < kTopologyCount; ++t) {
        const auto topo = static_cast<Topology>(t);
        auto batch = enumerate_designs(network, cfg.grid, topo, demand_rank, total_mean_demand);
        counts_by_topology[t] = batch.size();
        for (auto& d : batch) designs.push_back(std::move(d));
    }
}

void Pipeline::evaluate_all() {
    const std::size_t D = designs.size();
    const std::size_t B = scenarios.size();
    results.assign(D, std::vector<EvaluationResult>(B));
    parallel_for(D * B, cfg.threads, [&](std::size_t k) {
        const std::size_t d = k / B;
        const std::size_t b = k % B;
        results[d][b] =
            evaluate_design(designs[d], network, scenarios[b], cfg.costs,
                            cfg.risk.thresholds());
    });
}

void Pipeline::summarize_all() {
    const std::size_t D = designs.size();
    // two-phase: raw metrics first, then scores under the candidate-set
    // normalizers
    summaries.clear();
    summaries.reserve(D);
    const Normalizers unit;  // {0,1} ranges, placeholder for pass one
    for (std::size_t d = 0; d < D; ++d)
        summaries.push_back(summarize_design(designs[d].label, designs[d].topology, results[d],
                                             cfg.risk, unit));
    normalizers = compute_normalizers(summaries);
    for (auto& s : summaries) rescore(s, cfg.risk, normalizers);

    selection = select_best(summaries);

    winners.clear();
    pareto_union.clear();
    for (int t = 0; t < kTopologyCount; ++t) {
        std::vector<std::size_t> members;
        for (std::size_t d = 0; d < D; ++d)
            if (designs[d].topology == static_cast<Topology>(t)) members.push_back(d);
        if (members.empty()) continue;
        std::vector<DesignSummary> class_summaries;
        class_summaries.reserve(members.size());
        for (std::size_t d : members) class_summaries.push_back(summaries[d]);
        const SelectionResult class_sel = select_best(class_summaries);
        winners.emplace_back(static_cast<Topology>(t), members[class_sel.best]);
        for (std::size_t local : pareto_front_indices(class_summaries))
            pareto_union.push_back(members[local]);
    }

    std::vector<std::pair<std::string, std::vector<EvaluationResult>>> entrants;
    for (const auto& [topo, d] : winners) entrants.emplace_back(designs[d].label, results[d]);
    scen_best = scenario_best_probabilities(entrants, cfg.risk);
}

void Pipeline::baseline_and_stress() {
    baseline = deterministic_baseline(designs, network, posterior, cfg.costs,
                                      cfg.risk.thresholds(), cfg.baseline_mode);
    stress_set = stress_scenarios(posterior, cfg.stress);

    std::vector<std::pair<std::string, const Design*>> entrants;
    entrants.emplace_back("bayesian_posterior_risk", &designs[selection.best]);
    entrants.emplace_back("deterministic_baseline", &designs[baseline.index]);
    for (const auto& [topo, d] : winners)
        if (topo == Topology::FC) entrants.emplace_back("fc_speed_benchmark", &designs[d]);
    stress_report = compare_designs(entrants, network, stress_set, cfg.costs, cfg.risk,
                                    /*baseline=*/1, /*focal=*/0, cfg.threads);
}

void Pipeline::run_sensitivity() {
    sensitivity = sensitivity_grid(summaries, cfg.sensitivity_rows, cfg.risk, normalizers);
}

void Pipeline::write_manifest(OutputSet& out) const {
    std::ofstream f(out.path("manifest.json"), std::ios::binary);
    f << "{\n  \"manifest_ref\": \"" << manifest_ref << "\",\n"
      << "  \"input_hash\": \"" << hash_hex(fnv1a64(input_bytes)) << "\",\n"
      << "  \"tool\": \"netdesign\",\n  \"config\": ";
    // indent the echo under the config key
    const std::string echo = config_echo_json(cfg);
    for (char c : echo) {
        f << c;
        if (c == '\n') f << "  ";
    }
    f << "\n}\n";
}

void Pipeline::write_fit_outputs(OutputSet& out) const {
    export_panel(panel,
                 out.stem("panel", {"_od.csv", "_cost.csv", "_reliability.csv", "_regimes.csv"}),
                 manifest_ref);
    export_posterior(
        posterior,
        out.stem("posterior", {"_demand.csv", "_traveltime.csv", "_reliability.csv", "_cost.csv"}),
        manifest_ref);

    CsvWriter w(out.path("posterior_summary.csv"), manifest_ref,
                {"component", "model", "quantity", "value", "prior_only"});
    const int prior_only = panel.days == 0 ? 1 : 0;
    w.cell("od_demand").cell("gamma_poisson").cell("mean_daily_od_intensity");
    w.cell(post_summary.mean_daily_od_intensity).cell(prior_only);
    w.end_row();
    w.cell("travel_time").cell("lognormal_nig").cell("mean_log_travel_time");
    w.cell(post_summary.mean_log_travel_time).cell(prior_only);
    w.end_row();
    w.cell("hub_reliability").cell("beta_binomial").cell("mean_candidate_hub_reliability");
    w.cell(post_summary.mean_hub_reliability).cell(prior_only);
    w.end_row();
    w.cell("cost_multiplier").cell("lognormal_nig").cell("mean_log_cost_multiplier");
    w.cell(post_summary.mean_log_cost_multiplier).cell(prior_only);
    w.end_row();
}

void Pipeline::write_sample_outputs(OutputSet& out) const {
    {
        CsvWriter w(out.path("scenarios_od.csv"), manifest_ref,
                    {"scenario_id", "origin", "destination", "demand", "travel_time"});
        for (const Scenario& sc : scenarios)
            for (int i = 0; i < network.node_count; ++i)
                for (int j = 0; j < network.node_count; ++j) {
                    if (i == j) continue;
                    w.cell(sc.scenario_id).cell(i).cell(j).cell(sc.demand(i, j));
                    w.cell_full(sc.travel_time(i, j));
                    w.end_row();
                }
    }
    {
        CsvWriter w(out.path("scenarios_hub.csv"), manifest_ref,
                    {"scenario_id", "hub", "reliability"});
        for (const Scenario& sc : scenarios)
            for (std::size_t h = 0; h < sc.hub_reliability.size(); ++h) {
                w.cell(sc.scenario_id).cell(h).cell_full(sc.hub_reliability[h]);
                w.end_row();
            }
    }
    {
        CsvWriter w(out.path("scenarios_meta.csv"), manifest_ref,
                    {"scenario_id", "cost_multiplier"});
        for (const Scenario& sc : scenarios) {
            w.cell(sc.scenario_id).cell_full(sc.cost_multiplier);
            w.end_row();
        }
    }
}

void Pipeline::write_enumerate_outputs(OutputSet& out) const {
    {
        CsvWriter w(out.path("candidate_counts.csv"), manifest_ref, {"topology", "count"});
        for (int t = 0; t < kTopologyCount; ++t) {
            w.cell(topology_name(static_cast<Topology>(t)));
            w.cell(counts_by_topology[t]);
            w.end_row();
        }
    }
    {
        CsvWriter w(out.path("design_catalog.csv"), manifest_ref,
                    {"label", "topology", "hubs", "capacity_multiplier", "direct_level", "R",
                     "direct_links"});
        for (const Design& d : designs) {
            std::string hubs;
            for (std::size_t k = 0; k < d.hubs.size(); ++k) {
                if (k) hubs += '-';
                hubs += std::to_string(d.hubs[k] + 1);
            }
            if (hubs.empty()) hubs = "none";
            w.cell(d.label).cell(topology_name(d.topology)).cell(hubs);
            w.cell(d.capacity_multiplier).cell(d.direct_fraction);
            w.cell(topology_has_allocation_bound(d.topology) ? d.allocation_bound : 0);
            w.cell(d.direct_links.size());
            w.end_row();
        }
    }
}

void Pipeline::write_evaluate_outputs(OutputSet& out) const {
    export_summaries(out.path("summaries.csv"), manifest_ref, summaries, &selection.ranking);
    std::vector<std::pair<std::string, std::vector<EvaluationResult>>> winner_results;
    for (const auto& [topo, d] : winners)
        winner_results.emplace_back(designs[d].label, results[d]);
    export_results(out.path("winner_scenario_results.csv"), manifest_ref, winner_results);
}

void Pipeline::write_select_outputs(OutputSet& out) const {
    {
        std::vector<DesignSummary> rows;
        for (const auto& [topo, d] : winners) rows.push_back(summaries[d]);
        std::vector<std::size_t> order(rows.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (rows[a].score != rows[b].score) return rows[a].score < rows[b].score;
            return rows[a].label < rows[b].label;
        });
        export_summaries(out.path("best_by_topology.csv"), manifest_ref, rows, &order);
    }
    {
        const std::size_t top = std::min<std::size_t>(20, selection.ranking.size());
        std::vector<std::size_t> order(selection.ranking.begin(),
                                       selection.ranking.begin() + top);
        export_summaries(out.path("top_designs.csv"), manifest_ref, summaries, &order);
    }
    {
        std::vector<DesignSummary> rows;
        for (std::size_t d : pareto_union) rows.push_back(summaries[d]);
        export_summaries(out.path("pareto.csv"), manifest_ref, rows);
    }
    {
        CsvWriter w(out.path("scenario_best.csv"), manifest_ref,
                    {"topology", "winner_label", "scenario_best_probability", "wins",
                     "mean_scenario_loss"});
        for (std::size_t e = 0; e < scen_best.size(); ++e) {
            w.cell(topology_name(winners[e].first)).cell(scen_best[e].label);
            w.cell(scen_best[e].probability).cell(scen_best[e].wins);
            w.cell(scen_best[e].mean_loss);
            w.end_row();
        }
    }
    {
        std::vector<DesignSummary> row{summaries[selection.best]};
        export_summaries(out.path("selected_design.csv"), manifest_ref, row);
    }
}

void Pipeline::write_stress_outputs(OutputSet& out) const {
    {
        CsvWriter w(out.path("baseline.csv"), manifest_ref,
                    {"mode", "label", "nominal_cost", "nominal_feasible",
                     "nominal_max_arrival", "nominal_max_hub_delay"});
        w.cell(cfg.baseline_mode == BaselineMode::mean_only ? "mean_only" : "cost_priority");
        w.cell(designs[baseline.index].label).cell(baseline.nominal.total_cost);
        w.cell(baseline.nominal_feasible ? 1 : 0);
        w.cell(baseline.nominal.max_arrival).cell(baseline.nominal.max_hub_delay);
        w.end_row();
    }
    export_comparison(out.path("stress_metrics.csv"), out.path("stress_gains.csv"),
                      manifest_ref, stress_report);
}

void Pipeline::write_sensitivity_outputs(OutputSet& out) const {
    export_sensitivity(out.path("sensitivity.csv"), manifest_ref, sensitivity,
                       cfg.sensitivity_names);
}

namespace {

int guarded(const RunConfig& cfg, const std::function<void(Pipeline&, OutputSet&)>& body) {
    try {
        Pipeline p(cfg);
        OutputSet out(cfg.out_dir);
        body(p, out);
        out.commit();
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int cmd_fit(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.write_manifest(out);
        p.write_fit_outputs(out);
    });
}

int cmd_sample(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.write_manifest(out);
        p.write_sample_outputs(out);
    });
}

int cmd_enumerate(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.enumerate_all();
        p.write_manifest(out);
        p.write_enumerate_outputs(out);
    });
}

int cmd_evaluate(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.enumerate_all();
        p.evaluate_all();
        p.summarize_all();
        p.write_manifest(out);
        p.write_evaluate_outputs(out);
    });
}

int cmd_select(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.enumerate_all();
        p.evaluate_all();
        p.summarize_all();
        p.write_manifest(out);
        p.write_evaluate_outputs(out);
        p.write_select_outputs(out);
    });
}

int cmd_stress(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.enumerate_all();
        p.evaluate_all();
        p.summarize_all();
        p.baseline_and_stress();
        p.write_manifest(out);
        p.write_stress_outputs(out);
    });
}

int cmd_sensitivity(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.enumerate_all();
        p.evaluate_all();
        p.summarize_all();
        p.run_sensitivity();
        p.write_manifest(out);
        p.write_sensitivity_outputs(out);
    });
}

int cmd_verify(const RunConfig& cfg, const VerifyOptions& options) {
    try {
        cfg.validate();
        OutputSet out(cfg.out_dir);
        TheoremReport theorem;
        const auto suites = run_verification(cfg.seed, options, &theorem);
        const std::string ref = hash_hex(fnv1a64(config_echo_json(cfg)));
        {
            CsvWriter w(out.path("verify_report.csv"), ref, {"suite", "pass", "detail"});
            for (const auto& s : suites) {
                w.cell(s.name).cell(s.pass ? 1 : 0).cell(s.detail);
                w.end_row();
            }
        }
        export_theorem_report(out.path("theorem_report.csv"), ref, theorem);
        out.commit();
        for (const auto& s : suites)
            std::cout << (s.pass ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.detail << "\n";
        return all_passed(suites) ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "stage failure: " << e.what() << "\n";
        return 1;
    }
}

int cmd_run(const RunConfig& cfg) {
    return guarded(cfg, [](Pipeline& p, OutputSet& out) {
        p.prepare_data();
        p.fit();
        p.sample();
        p.enumerate_all();
        p.evaluate_all();
        p.summarize_all();
        p.baseline_and_stress();
        p.run_sensitivity();
        p.write_manifest(out);
        p.write_fit_outputs(out);
        p.write_sample_outputs(out);
        p.write_enumerate_outputs(out);
        p.write_evaluate_outputs(out);
        p.write_select_outputs(out);
        p.write_stress_outputs(out);
        p.write_sensitivity_outputs(out);
    });
}

}  // namespace netdesign
