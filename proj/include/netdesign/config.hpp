#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/designspace.hpp"
#include "netdesign/evaluator.hpp"
#include "netdesign/experiments.hpp"
#include "netdesign/ingest.hpp"
#include "netdesign/posterior.hpp"
#include "netdesign/riskengine.hpp"

namespace netdesign {

// Full run configuration. Paper-stated settings are the defaults where the
// source experiments state them (alpha = 0.90, CAB B = 120, stress
// (1.22, 0.26, 180), weights (0.25, 0.55, 0.20), CAB T* = 34, d_t = 8);
// everything else is a calibrated repo default, overridable per field.
struct RunConfig {
    std::string experiment = "sim";  // "sim" or "cab"
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    std::string out_dir = "out";

    // cab experiment data
    std::string cab_path = "data/CAB25.txt";
    std::vector<int> cab_subset = {3, 4, 6, 7, 9, 12, 14, 17, 18, 21, 22, 25};
    std::vector<int> cab_candidate_hubs_1based = {12, 1, 3, 5};  // case-study indices
    double target_mean_demand = 24.0;
    int panel_days = 120;

    RegimeConfig regime = RegimeConfig::sim_defaults();
    SynthConfig synth;  // sim geometry; synth.gen holds the panel generator constants
    PosteriorPriors priors;
    int scenario_count = 70;
    RiskConfig risk;
    DesignGrid grid = DesignGrid::sim_defaults();
    CostParams costs;
    StressConfig stress;
    bool stress_seed_set = false;  // when false, derived from the master seed
    BaselineMode baseline_mode = BaselineMode::mean_only;

    std::vector<RiskWeights> sensitivity_rows;
    std::vector<std::string> sensitivity_names;

    void validate() const;
};

RunConfig default_config(const std::string& experiment);

// Parse a JSON config file over the experiment defaults. Unknown keys are
// rejected so typos fail loudly.
RunConfig load_config_file(const std::string& path);
RunConfig config_from_json_text(const std::string& text);

// Deterministic config echo for the run manifest. Runtime-only fields
// (threads, out_dir) are excluded so they cannot perturb output bytes.
std::string config_echo_json(const RunConfig& cfg);

}  // namespace netdesign
