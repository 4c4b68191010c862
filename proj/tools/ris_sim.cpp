// ris_sim: experiment runner for the RIS-aided uplink simulator.
//
//   ris_sim <nmse-sweep|stat-vs-inst|power-scaling|validate> [--config file.json]
//           [--seed S] [--trials T] [--parallelism P] [--out file.csv]
//           [--sweep N=16,64,256] [--print-config]
//
// Exit codes: 0 success, 1 config error, 2 validation-suite failure.

#include "ris/config.hpp"
#include "ris/error.hpp"
#include "ris/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <utility>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> parallelism;
    std::optional<std::string> out;
    std::optional<std::string> sweep;
    bool print_config = false;
};

void add_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--seed", o.seed, "RNG seed (scenario angles and Monte-Carlo streams)");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per sweep point");
    cmd->add_option("--parallelism", o.parallelism, "worker threads");
    cmd->add_option("--out", o.out, "output CSV path");
    cmd->add_option("--sweep", o.sweep, "sweep override, e.g. N=16,64,256");
    cmd->add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
}

ris::ExperimentConfig resolve(const std::string& experiment, const Options& o) {
    nlohmann::json j = o.config_path.empty() ? nlohmann::json::object() : ris::load_config_file(o.config_path);
    if (!j.is_object()) throw ris::Error(ris::ErrorKind::Config, "config root must be an object");
    if (j.contains("experiment") && j["experiment"] != experiment)
        throw ris::Error(ris::ErrorKind::Config, "config is for '" + j["experiment"].get<std::string>() +
                                                     "' but subcommand is '" + experiment + "'");
    j["experiment"] = experiment;
    if (o.seed) j["seed"] = *o.seed;
    if (o.trials) j["mc"]["trials"] = *o.trials;
    if (o.parallelism) j["mc"]["parallelism"] = *o.parallelism;
    if (o.out) j["output"] = *o.out;
    if (o.sweep) {
        const ris::SweepSpec s = ris::parse_sweep_arg(*o.sweep);
        j["sweep"] = {{"var", s.var}, {"values", s.values}};
    }

    ris::ExperimentConfig cfg = ris::config_from_json(j);
    if (cfg.output_path.empty()) cfg.output_path = experiment + ".csv";
    cfg.resolve();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided MISO uplink: LMMSE estimation, rate bound and phase design experiments"};
    app.require_subcommand(1);

    Options opts;
    const std::pair<const char*, const char*> commands[] = {
        {"nmse-sweep", "NMSE and per-antenna MSE versus N, closed form and Monte Carlo"},
        {"stat-vs-inst", "statistical phase design against the genie instantaneous baseline"},
        {"power-scaling", "rate versus N with transmit power scaled as 1/N or 1/N^2"},
        {"validate", "closed forms against Monte-Carlo oracles; exit 2 on a failed tolerance"},
    };
    for (const auto& [name, about] : commands) add_flags(app.add_subcommand(name, about), opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    ris::ExperimentConfig cfg;
    try {
        cfg = resolve(experiment, opts);
    } catch (const std::exception& e) {
        std::cerr << "ris_sim: " << e.what() << '\n';
        return kExitConfig;
    }

    if (opts.print_config) {
        std::cout << ris::config_to_json(cfg).dump(2) << '\n';
        return kExitOk;
    }

    try {
        const ris::ExperimentResult result = ris::run_experiment(cfg);
        ris::write_outputs(cfg.output_path, cfg, result);
        std::cerr << "ris_sim: wrote " << result.rows.size() << " rows to " << cfg.output_path << '\n';
        if (!result.validation_passed) {
            std::cerr << "ris_sim: validation suite failed\n";
            return kExitValidation;
        }
    } catch (const ris::Error& e) {
        std::cerr << "ris_sim: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
