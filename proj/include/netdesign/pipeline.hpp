#pragma once

#include <string>
#include <vector>

#include "netdesign/config.hpp"
#include "netdesign/verify.hpp"

namespace netdesign {

// Files are written as <name>.partial and renamed on commit, so an
// aborted run leaves its partial outputs behind instead of stale or
// truncated final files.
class OutputSet {
public:
    explicit OutputSet(std::string dir);
    std::string path(const std::string& name);
    // For writers that append their own suffixes to a stem (the panel and
    // posterior bundles): registers prefix+suffix for each suffix.
    std::string stem(const std::string& prefix, std::initializer_list<std::string> suffixes);
    void commit();

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> pending_;  // partial -> final
};

// In-memory realization of the full design methodology; stages are plain
// methods so the CLI subcommands and the tests can drive exactly the
// slices they need.
struct Pipeline {
    explicit Pipeline(RunConfig config);

    RunConfig cfg;
    std::string input_bytes;  // raw benchmark text (cab experiment)
    std::string manifest_ref;

    NetworkData network;
    HistoricalPanel panel;
    PosteriorState posterior;
    PosteriorSummary post_summary;
    std::vector<Scenario> scenarios;
    DMatrix demand_rank;
    double total_mean_demand = 0.0;
    std::vector<Design> designs;
    std::vector<std::size_t> counts_by_topology;  // kTopologyCount entries
    std::vector<std::vector<EvaluationResult>> results;  // per design, per scenario
    std::vector<DesignSummary> summaries;
    Normalizers normalizers;
    SelectionResult selection;
    std::vector<std::pair<Topology, std::size_t>> winners;  // per topology: design index
    std::vector<std::size_t> pareto_union;                  // design indices, Alg. 1 style
    std::vector<ScenarioBestEntry> scen_best;
    BaselineChoice baseline;
    std::vector<Scenario> stress_set;
    ComparisonReport stress_report;
    std::vector<SensitivityRow> sensitivity;

    void prepare_data();
    void fit();
    void sample();
    void enumerate_all();
    void evaluate_all();
    void summarize_all();
    void baseline_and_stress();
    void run_sensitivity();

    // stage output writers
    void write_manifest(OutputSet& out) const;
    void write_fit_outputs(OutputSet& out) const;
    void write_sample_outputs(OutputSet& out) const;
    void write_enumerate_outputs(OutputSet& out) const;
    void write_evaluate_outputs(OutputSet& out) const;
    void write_select_outputs(OutputSet& out) const;
    void write_stress_outputs(OutputSet& out) const;
    void write_sensitivity_outputs(OutputSet& out) const;
};

// CLI entry points; exit codes: 0 success, 1 verification/stage failure,
// 2 input error.
int cmd_fit(const RunConfig& cfg);
int cmd_sample(const RunConfig& cfg);
int cmd_enumerate(const RunConfig& cfg);
int cmd_evaluate(const RunConfig& cfg);
int cmd_select(const RunConfig& cfg);
int cmd_stress(const RunConfig& cfg);
int cmd_sensitivity(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, const VerifyOptions& options = {});
int cmd_run(const RunConfig& cfg);

}  // namespace netdesign
