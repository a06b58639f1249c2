#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string experiment;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    int threads = 0;
    std::string out_dir;
    std::string cab_path;
    int scenario_count = 0;

    bool seed_given() const { return seed_opt && seed_opt->count() > 0; }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file")
        ->envname("NETDESIGN_CONFIG");
    cmd->add_option("--experiment", args.experiment, "experiment preset: sim or cab")
        ->envname("NETDESIGN_EXPERIMENT");
    args.seed_opt = cmd->add_option("--seed", args.seed, "master seed (required)");
    args.seed_opt->envname("NETDESIGN_SEED");
    cmd->add_option("--threads", args.threads, "worker threads (must not change outputs)")
        ->envname("NETDESIGN_THREADS");
    cmd->add_option("--out", args.out_dir, "output directory")->envname("NETDESIGN_OUT");
    cmd->add_option("--cab", args.cab_path, "CAB benchmark file path")
        ->envname("NETDESIGN_CAB");
    cmd->add_option("--scenarios", args.scenario_count, "posterior scenario count B")
        ->envname("NETDESIGN_SCENARIOS");
}

netdesign::RunConfig build_config(const CommonArgs& args) {
    using namespace netdesign;
    RunConfig cfg;
    if (!args.config_path.empty()) {
        cfg = load_config_file(args.config_path);
        if (!args.experiment.empty() && cfg.experiment != args.experiment)
            throw ValidationError("--experiment disagrees with the config file");
    } else {
        cfg = default_config(args.experiment.empty() ? "sim" : args.experiment);
    }
    if (args.seed_given()) {
        cfg.seed = args.seed;
        cfg.seed_set = true;
    }
    if (args.threads > 0) cfg.threads = args.threads;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!args.cab_path.empty()) cfg.cab_path = args.cab_path;
    if (args.scenario_count > 0) cfg.scenario_count = args.scenario_count;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian multi-topology express network design pipeline"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const netdesign::RunConfig&);
    };
    const Sub subs[] = {
        {"fit", "fit posteriors and write the posterior bundle", &netdesign::cmd_fit},
        {"sample", "draw posterior-predictive scenarios", &netdesign::cmd_sample},
        {"enumerate", "enumerate candidate designs per topology", &netdesign::cmd_enumerate},
        {"evaluate", "evaluate all candidates over scenarios", &netdesign::cmd_evaluate},
        {"select", "rank designs and extract Pareto/scenario-best reports",
         &netdesign::cmd_select},
        {"stress", "deterministic baseline and future stress comparison",
         &netdesign::cmd_stress},
        {"sensitivity", "preference-weight sensitivity grid", &netdesign::cmd_sensitivity},
        {"run", "full pipeline, all reports", &netdesign::cmd_run},
    };

    CommonArgs args[9];
    int idx = 0;
    for (const Sub& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, args[idx]);
        const CommonArgs* a = &args[idx];
        const auto fn = s.fn;
        cmd->final_callback([a, fn]() {
            const netdesign::RunConfig cfg = build_config(*a);
            std::exit(fn(cfg));
        });
        ++idx;
    }

    CLI::App* verify = app.add_subcommand("verify", "run the oracle property suites");
    add_common(verify, args[8]);
    verify->final_callback([&args]() {
        const netdesign::RunConfig cfg = build_config(args[8]);
        std::exit(netdesign::cmd_verify(cfg));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // malformed invocation is an input error
    } catch (const netdesign::ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
