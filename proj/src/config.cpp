#include "netdesign/config.hpp"

#include <set>

#include "json.hpp"
#include "netdesign/csv.hpp"
#include "netdesign/errors.hpp"

namespace netdesign {

using nlohmann::json;

void RunConfig::validate() const {
    if (experiment != "sim" && experiment != "cab")
        throw ValidationError("experiment must be 'sim' or 'cab'");
    if (!seed_set) throw ValidationError("seed is required (pass --seed or set it in the config)");
    if (threads < 1) throw ValidationError("threads must be at least 1");
    if (scenario_count <= 0) throw ValidationError("scenario count B must be positive");
    if (panel_days <= 0) throw ValidationError("panel days must be positive");
    regime.validate();
    risk.validate();
    grid.validate();
    costs.validate();
    stress.validate();
    if (sensitivity_rows.empty())
        throw ValidationError("sensitivity grid must contain at least one weight row");
}

RunConfig default_config(const std::string& experiment) {
    RunConfig cfg;
    cfg.experiment = experiment;
    if (experiment == "sim") {
        cfg.regime = RegimeConfig::sim_defaults();
        cfg.grid = DesignGrid::sim_defaults();
        cfg.scenario_count = 70;  // matches the reported probability denominators
        cfg.risk.service_target = 42.0;  // calibrated
        cfg.risk.hold_limit = 8.0;       // calibrated
        cfg.synth.gen.travel_log_sd = 0.45;  // heavier corridor tails than the CAB panel
        cfg.baseline_mode = BaselineMode::mean_only;
        cfg.sensitivity_rows = sim_weight_rows();
        for (const auto& w : cfg.sensitivity_rows) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "w%.2f_%.2f_%.2f", w.cost, w.time, w.emission);
            cfg.sensitivity_names.emplace_back(buf);
        }
    } else if (experiment == "cab") {
        cfg.regime = RegimeConfig::cab_defaults();
        cfg.grid = DesignGrid::cab_defaults();
        cfg.scenario_count = 120;
        cfg.risk.service_target = 34.0;
        cfg.risk.hold_limit = 8.0;
        cfg.baseline_mode = BaselineMode::cost_priority;
        for (const auto& [name, w] : cab_weight_profiles()) {
            cfg.sensitivity_rows.push_back(w);
            cfg.sensitivity_names.push_back(name);
        }
        // CAB flows are an order of magnitude denser than the synthetic
        // field; rates rescaled so totals land near the reported millions.
        cfg.costs.fixed_hub_cost = 0.008;
        cfg.costs.direct_link_open_cost = 0.0006;
        cfg.costs.unit_access_cost = 2.5e-7;
        cfg.costs.unit_direct_cost = 4.5e-7;
        cfg.costs.sorting_cost_per_parcel = 1.5e-8;
        cfg.costs.capacity_install_cost = 3.0e-5;
    } else {
        throw ValidationError("experiment must be 'sim' or 'cab'");
    }
    return cfg;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown config key '" + it.key() + "' in " + where);
}

void parse_regime_params(const json& j, RegimeParams& rp, const std::string& where) {
    reject_unknown(j, {"days", "demand_multiplier", "traveltime_multiplier",
                       "reliability_shift"}, where);
    if (j.contains("days")) rp.days = j.at("days").get<int>();
    if (j.contains("demand_multiplier")) rp.demand_multiplier = j.at("demand_multiplier");
    if (j.contains("traveltime_multiplier"))
        rp.traveltime_multiplier = j.at("traveltime_multiplier");
    if (j.contains("reliability_shift")) rp.reliability_shift = j.at("reliability_shift");
}

void parse_weights(const json& j, RiskWeights& w, const std::string& where) {
    reject_unknown(j, {"cost", "time", "emission", "service", "hold"}, where);
    if (j.contains("cost")) w.cost = j.at("cost");
    if (j.contains("time")) w.time = j.at("time");
    if (j.contains("emission")) w.emission = j.at("emission");
    if (j.contains("service")) w.service = j.at("service");
    if (j.contains("hold")) w.hold = j.at("hold");
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }

    const std::string experiment = j.value("experiment", std::string("sim"));
    RunConfig cfg = default_config(experiment);

    reject_unknown(j, {"experiment", "seed", "threads", "out_dir", "scenario_count", "cab",
                       "regime", "panel_gen", "synth", "priors", "risk", "grid", "costs",
                       "stress", "baseline_mode", "sensitivity"},
                   "config root");

    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_set = true;
    }
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("scenario_count")) cfg.scenario_count = j.at("scenario_count").get<int>();

    if (j.contains("cab")) {
        const json& c = j.at("cab");
        reject_unknown(c, {"path", "subset", "candidate_hubs", "target_mean_demand",
                           "panel_days"}, "cab");
        if (c.contains("path")) cfg.cab_path = c.at("path").get<std::string>();
        if (c.contains("subset")) cfg.cab_subset = c.at("subset").get<std::vector<int>>();
        if (c.contains("candidate_hubs"))
            cfg.cab_candidate_hubs_1based = c.at("candidate_hubs").get<std::vector<int>>();
        if (c.contains("target_mean_demand"))
            cfg.target_mean_demand = c.at("target_mean_demand");
        if (c.contains("panel_days")) cfg.panel_days = c.at("panel_days").get<int>();
    }

    if (j.contains("regime")) {
        const json& r = j.at("regime");
        reject_unknown(r, {"normal", "surge", "storm", "cost_sigma"}, "regime");
        if (r.contains("normal"))
            parse_regime_params(r.at("normal"), cfg.regime.at(Regime::normal), "regime.normal");
        if (r.contains("surge"))
            parse_regime_params(r.at("surge"), cfg.regime.at(Regime::surge), "regime.surge");
        if (r.contains("storm"))
            parse_regime_params(r.at("storm"), cfg.regime.at(Regime::storm), "regime.storm");
        if (r.contains("cost_sigma")) cfg.regime.cost_sigma = r.at("cost_sigma");
    }

    if (j.contains("panel_gen")) {
        const json& g = j.at("panel_gen");
        reject_unknown(g, {"speed", "travel_log_sd", "reliability_base", "reliability_trials"},
                       "panel_gen");
        if (g.contains("speed")) cfg.synth.gen.speed = g.at("speed");
        if (g.contains("travel_log_sd")) cfg.synth.gen.travel_log_sd = g.at("travel_log_sd");
        if (g.contains("reliability_base"))
            cfg.synth.gen.reliability_base = g.at("reliability_base");
        if (g.contains("reliability_trials"))
            cfg.synth.gen.reliability_trials = g.at("reliability_trials").get<long long>();
        cfg.priors.speed = cfg.synth.gen.speed;
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        reject_unknown(s, {"nodes", "candidate_hubs", "box_scale", "demand_base",
                           "demand_log_sd"}, "synth");
        if (s.contains("nodes")) cfg.synth.nodes = s.at("nodes").get<int>();
        if (s.contains("candidate_hubs"))
            cfg.synth.candidate_hubs_1based = s.at("candidate_hubs").get<std::vector<int>>();
        if (s.contains("box_scale")) cfg.synth.box_scale = s.at("box_scale");
        if (s.contains("demand_base")) cfg.synth.demand_base = s.at("demand_base");
        if (s.contains("demand_log_sd")) cfg.synth.demand_log_sd = s.at("demand_log_sd");
    }

    if (j.contains("priors")) {
        const json& p = j.at("priors");
        reject_unknown(p, {"demand_c0", "demand_shape_floor", "nig_kappa0", "nig_alpha0",
                           "nig_beta0", "beta_alpha0", "beta_beta0"}, "priors");
        if (p.contains("demand_c0")) cfg.priors.demand_c0 = p.at("demand_c0");
        if (p.contains("demand_shape_floor"))
            cfg.priors.demand_shape_floor = p.at("demand_shape_floor");
        if (p.contains("nig_kappa0")) cfg.priors.nig_kappa0 = p.at("nig_kappa0");
        if (p.contains("nig_alpha0")) cfg.priors.nig_alpha0 = p.at("nig_alpha0");
        if (p.contains("nig_beta0")) cfg.priors.nig_beta0 = p.at("nig_beta0");
        if (p.contains("beta_alpha0")) cfg.priors.beta_alpha0 = p.at("beta_alpha0");
        if (p.contains("beta_beta0")) cfg.priors.beta_beta0 = p.at("beta_beta0");
    }

    if (j.contains("risk")) {
        const json& r = j.at("risk");
        reject_unknown(r, {"alpha", "service_target", "hold_limit", "service_tolerance",
                           "hold_tolerance", "weights"}, "risk");
        if (r.contains("alpha")) cfg.risk.alpha = r.at("alpha");
        if (r.contains("service_target")) cfg.risk.service_target = r.at("service_target");
        if (r.contains("hold_limit")) cfg.risk.hold_limit = r.at("hold_limit");
        if (r.contains("service_tolerance")) cfg.risk.service_tolerance = r.at("service_tolerance");
        if (r.contains("hold_tolerance")) cfg.risk.hold_tolerance = r.at("hold_tolerance");
        if (r.contains("weights")) parse_weights(r.at("weights"), cfg.risk.weights, "risk.weights");
    }

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        reject_unknown(g, {"single_min_size", "single_max_size", "multi_min_size",
                           "multi_max_size", "capacity_levels", "direct_levels",
                           "direct_level_counts", "allocation_bounds",
                           "reference_sorting_window", "congestion_gamma"},
                       "grid");
        if (g.contains("single_min_size")) cfg.grid.single_min_size = g.at("single_min_size");
        if (g.contains("single_max_size")) cfg.grid.single_max_size = g.at("single_max_size");
        if (g.contains("multi_min_size")) cfg.grid.multi_min_size = g.at("multi_min_size");
        if (g.contains("multi_max_size")) cfg.grid.multi_max_size = g.at("multi_max_size");
        if (g.contains("capacity_levels"))
            cfg.grid.capacity_levels = g.at("capacity_levels").get<std::vector<double>>();
        if (g.contains("direct_levels"))
            cfg.grid.direct_levels = g.at("direct_levels").get<std::vector<double>>();
        if (g.contains("direct_level_counts")) {
            cfg.grid.direct_level_counts.clear();
            for (auto it = g.at("direct_level_counts").begin();
                 it != g.at("direct_level_counts").end(); ++it)
                cfg.grid.direct_level_counts[std::stod(it.key())] = it.value().get<int>();
        }
        if (g.contains("allocation_bounds"))
            cfg.grid.allocation_bounds = g.at("allocation_bounds").get<std::vector<int>>();
        if (g.contains("reference_sorting_window"))
            cfg.grid.reference_sorting_window = g.at("reference_sorting_window");
        if (g.contains("congestion_gamma")) cfg.grid.congestion_gamma = g.at("congestion_gamma");
    }

    if (j.contains("costs")) {
        const json& c = j.at("costs");
        reject_unknown(c, {"fixed_hub_cost", "direct_link_open_cost", "unit_access_cost",
                           "interhub_discount", "unit_direct_cost", "sorting_cost_per_parcel",
                           "capacity_install_cost", "local_service_time", "emission_rate"},
                       "costs");
        if (c.contains("fixed_hub_cost")) cfg.costs.fixed_hub_cost = c.at("fixed_hub_cost");
        if (c.contains("direct_link_open_cost"))
            cfg.costs.direct_link_open_cost = c.at("direct_link_open_cost");
        if (c.contains("unit_access_cost")) cfg.costs.unit_access_cost = c.at("unit_access_cost");
        if (c.contains("interhub_discount")) cfg.costs.interhub_discount = c.at("interhub_discount");
        if (c.contains("unit_direct_cost")) cfg.costs.unit_direct_cost = c.at("unit_direct_cost");
        if (c.contains("sorting_cost_per_parcel"))
            cfg.costs.sorting_cost_per_parcel = c.at("sorting_cost_per_parcel");
        if (c.contains("capacity_install_cost"))
            cfg.costs.capacity_install_cost = c.at("capacity_install_cost");
        if (c.contains("local_service_time"))
            cfg.costs.local_service_time = c.at("local_service_time");
        if (c.contains("emission_rate")) cfg.costs.emission_rate = c.at("emission_rate");
    }

    if (j.contains("stress")) {
        const json& s = j.at("stress");
        reject_unknown(s, {"amplification", "disruption_prob", "disruption_time_factor",
                           "count", "seed"}, "stress");
        if (s.contains("amplification")) cfg.stress.amplification = s.at("amplification");
        if (s.contains("disruption_prob")) cfg.stress.disruption_prob = s.at("disruption_prob");
        if (s.contains("disruption_time_factor"))
            cfg.stress.disruption_time_factor = s.at("disruption_time_factor");
        if (s.contains("count")) cfg.stress.count = s.at("count").get<int>();
        if (s.contains("seed")) {
            cfg.stress.seed = s.at("seed").get<std::uint64_t>();
            cfg.stress_seed_set = true;
        }
    }

    if (j.contains("baseline_mode")) {
        const std::string mode = j.at("baseline_mode").get<std::string>();
        if (mode == "mean_only") cfg.baseline_mode = BaselineMode::mean_only;
        else if (mode == "cost_priority") cfg.baseline_mode = BaselineMode::cost_priority;
        else throw ValidationError("baseline_mode must be 'mean_only' or 'cost_priority'");
    }

    if (j.contains("sensitivity")) {
        cfg.sensitivity_rows.clear();
        cfg.sensitivity_names.clear();
        for (const json& row : j.at("sensitivity")) {
            RiskWeights w = cfg.risk.weights;
            parse_weights(row, w, "sensitivity row");
            cfg.sensitivity_rows.push_back(w);
            cfg.sensitivity_names.push_back(
                row.contains("name") ? row.at("name").get<std::string>()
                                     : "row" + std::to_string(cfg.sensitivity_rows.size()));
        }
    }

    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    return config_from_json_text(read_file(path));
}

namespace {

json regime_to_json(const RegimeConfig& r) {
    auto one = [](const RegimeParams& p) {
        return json{{"days", p.days},
                    {"demand_multiplier", p.demand_multiplier},
                    {"traveltime_multiplier", p.traveltime_multiplier},
                    {"reliability_shift", p.reliability_shift}};
    };
    return json{{"normal", one(r.at(Regime::normal))},
                {"surge", one(r.at(Regime::surge))},
                {"storm", one(r.at(Regime::storm))},
                {"cost_sigma", r.cost_sigma}};
}

}  // namespace

std::string config_echo_json(const RunConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["scenario_count"] = cfg.scenario_count;
    if (cfg.experiment == "cab") {
        j["cab"] = {{"path", cfg.cab_path},
                    {"subset", cfg.cab_subset},
                    {"candidate_hubs", cfg.cab_candidate_hubs_1based},
                    {"target_mean_demand", cfg.target_mean_demand},
                    {"panel_days", cfg.panel_days}};
    }
    j["regime"] = regime_to_json(cfg.regime);
    j["panel_gen"] = {{"speed", cfg.synth.gen.speed},
                      {"travel_log_sd", cfg.synth.gen.travel_log_sd},
                      {"reliability_base", cfg.synth.gen.reliability_base},
                      {"reliability_trials", cfg.synth.gen.reliability_trials}};
    if (cfg.experiment == "sim") {
        j["synth"] = {{"nodes", cfg.synth.nodes},
                      {"candidate_hubs", cfg.synth.candidate_hubs_1based},
                      {"box_scale", cfg.synth.box_scale},
                      {"demand_base", cfg.synth.demand_base},
                      {"demand_log_sd", cfg.synth.demand_log_sd}};
    }
    j["priors"] = {{"demand_c0", cfg.priors.demand_c0},
                   {"demand_shape_floor", cfg.priors.demand_shape_floor},
                   {"nig_kappa0", cfg.priors.nig_kappa0},
                   {"nig_alpha0", cfg.priors.nig_alpha0},
                   {"nig_beta0", cfg.priors.nig_beta0},
                   {"beta_alpha0", cfg.priors.beta_alpha0},
                   {"beta_beta0", cfg.priors.beta_beta0}};
    j["risk"] = {{"alpha", cfg.risk.alpha},
                 {"service_target", cfg.risk.service_target},
                 {"hold_limit", cfg.risk.hold_limit},
                 {"service_tolerance", cfg.risk.service_tolerance},
                 {"hold_tolerance", cfg.risk.hold_tolerance},
                 {"weights",
                  {{"cost", cfg.risk.weights.cost},
                   {"time", cfg.risk.weights.time},
                   {"emission", cfg.risk.weights.emission},
                   {"service", cfg.risk.weights.service},
                   {"hold", cfg.risk.weights.hold}}}};
    json counts = json::object();
    for (const auto& [level, count] : cfg.grid.direct_level_counts)
        counts[format_fixed(level, 2)] = count;
    j["grid"] = {{"single_min_size", cfg.grid.single_min_size},
                 {"single_max_size", cfg.grid.single_max_size},
                 {"multi_min_size", cfg.grid.multi_min_size},
                 {"multi_max_size", cfg.grid.multi_max_size},
                 {"capacity_levels", cfg.grid.capacity_levels},
                 {"direct_levels", cfg.grid.direct_levels},
                 {"direct_level_counts", counts},
                 {"allocation_bounds", cfg.grid.allocation_bounds},
                 {"reference_sorting_window", cfg.grid.reference_sorting_window},
                 {"congestion_gamma", cfg.grid.congestion_gamma}};
    j["costs"] = {{"fixed_hub_cost", cfg.costs.fixed_hub_cost},
                  {"direct_link_open_cost", cfg.costs.direct_link_open_cost},
                  {"unit_access_cost", cfg.costs.unit_access_cost},
                  {"interhub_discount", cfg.costs.interhub_discount},
                  {"unit_direct_cost", cfg.costs.unit_direct_cost},
                  {"sorting_cost_per_parcel", cfg.costs.sorting_cost_per_parcel},
                  {"capacity_install_cost", cfg.costs.capacity_install_cost},
                  {"local_service_time", cfg.costs.local_service_time},
                  {"emission_rate", cfg.costs.emission_rate}};
    j["stress"] = {{"amplification", cfg.stress.amplification},
                   {"disruption_prob", cfg.stress.disruption_prob},
                   {"disruption_time_factor", cfg.stress.disruption_time_factor},
                   {"count", cfg.stress.count},
                   {"seed", cfg.stress.seed}};
    j["baseline_mode"] =
        cfg.baseline_mode == BaselineMode::mean_only ? "mean_only" : "cost_priority";
    json rows = json::array();
    for (std::size_t i = 0; i < cfg.sensitivity_rows.size(); ++i) {
        const RiskWeights& w = cfg.sensitivity_rows[i];
        rows.push_back({{"name", cfg.sensitivity_names[i]},
                        {"cost", w.cost},
                        {"time", w.time},
                        {"emission", w.emission},
                        {"service", w.service},
                        {"hold", w.hold}});
    }
    j["sensitivity"] = rows;
    return j.dump(2);
}

}  // namespace netdesign
