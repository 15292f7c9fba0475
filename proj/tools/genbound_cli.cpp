// Command-line front end for the generalization-bound toolkit: SDPI
// coefficient tables, bound profiles, the funnel-layer table, the
// generalization-error dominance experiment and the depth/width sweeps.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "genbound/experiments.hpp"
#include "genbound/report.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--out", flags.out, "output path ('-' for stdout)");
    cmd->add_option("--format", flags.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", flags.seed, "random seed")->each([&flags](const std::string&) {
        flags.seed_set = true;
    });
}

genbound::ExperimentConfig load_config(const CommonFlags& flags, genbound::ExperimentKind kind) {
    nlohmann::json j = nlohmann::json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw genbound::ConfigError("config", "cannot open '" + flags.config_path + "'");
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw genbound::ConfigError("config", e.what());
        }
    }
    genbound::ExperimentConfig cfg = genbound::parse_experiment_config(j, kind);
    // Flags override file values.
    if (flags.seed_set) {
        cfg.seed = flags.seed;
        cfg.has_seed = true;
    }
    if (!flags.out.empty()) cfg.out = flags.out;
    if (!flags.format.empty())
        cfg.format = flags.format == "csv" ? genbound::ReportFormat::csv
                                           : genbound::ReportFormat::json;
    return cfg;
}

int run(const CommonFlags& flags, genbound::ExperimentKind kind) {
    genbound::ExperimentConfig cfg = load_config(flags, kind);
    genbound::ExperimentReport report = genbound::run_experiment(cfg);
    genbound::emit(report, cfg.format, cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-theoretic generalization bounds: coefficients, profiles, experiments"};
    app.require_subcommand(1);

    CommonFlags sdpi_flags, bound_flags, table1_flags, genbound_flags, add_flags, split_flags;

    CLI::App* sdpi = app.add_subcommand("sdpi", "contraction coefficient table for a network");
    attach_common(sdpi, sdpi_flags);

    CLI::App* bound = app.add_subcommand("bound", "per-layer bound profiles for the case study");
    attach_common(bound, bound_flags);

    CLI::App* casestudy = app.add_subcommand("casestudy", "Gaussian-mixture case study experiments");
    casestudy->require_subcommand(1);
    CLI::App* table1 = casestudy->add_subcommand("table1", "funnel-layer table");
    attach_common(table1, table1_flags);
    CLI::App* genb = casestudy->add_subcommand("genbound", "gen-error estimate vs bounds");
    attach_common(genb, genbound_flags);

    CLI::App* sweep = app.add_subcommand("sweep", "depth/width sweeps for finite-parameter nets");
    sweep->require_subcommand(1);
    CLI::App* add_layer = sweep->add_subcommand("add-layer", "insert a hidden layer of width d*");
    attach_common(add_layer, add_flags);
    CLI::App* split_layer = sweep->add_subcommand("split-layer", "split one hidden layer in two");
    attach_common(split_layer, split_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sdpi->parsed()) return run(sdpi_flags, genbound::ExperimentKind::sdpi_table);
        if (bound->parsed()) return run(bound_flags, genbound::ExperimentKind::bound_profile);
        if (table1->parsed()) return run(table1_flags, genbound::ExperimentKind::table1);
        if (genb->parsed()) return run(genbound_flags, genbound::ExperimentKind::gen_bound);
        if (add_layer->parsed()) return run(add_flags, genbound::ExperimentKind::add_layer_sweep);
        if (split_layer->parsed())
            return run(split_flags, genbound::ExperimentKind::split_layer_sweep);
    } catch (const genbound::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 3;
    }
    std::cerr << "error: config: subcommand: none selected\n";
    return 2;
}
