// Experiment runner: simulates the identification method on configured
// regressions, analyzes excitation, and verifies the boundedness verdicts.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fepi/experiment.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSimulationError = 3;

struct CommonArgs {
    std::string config;
    std::string out_dir = ".";
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
    if (needs_config)
        cmd->add_option("--config", args.config, "experiment config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--dt", args.dt, "time step override (s)");
    cmd->add_option("--seed", args.seed, "noise seed override");
}

fepi::RunOverrides overrides(const CommonArgs& args) {
    fepi::RunOverrides ov;
    ov.dt = args.dt;
    ov.seed = args.seed;
    return ov;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw fepi::ConfigError("cannot open '" + path + "' for writing");
    f << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise-constant parameter identification under finite excitation"};
    app.require_subcommand(1);

    CommonArgs sim_args, ana_args, ver_args, rep_args;
    std::string experiment;
    std::string config_dir;

    auto* sim = app.add_subcommand("simulate", "run the experiment and write trajectory CSVs");
    add_common(sim, sim_args, true);
    auto* ana = app.add_subcommand("analyze", "excitation analysis report");
    add_common(ana, ana_args, true);
    auto* ver = app.add_subcommand("verify", "boundedness verdicts and envelope checks");
    add_common(ver, ver_args, true);
    auto* rep = app.add_subcommand("reproduce", "run a preloaded experiment end to end");
    rep->add_option("experiment", experiment, "one of: exp-a, exp-a-fast, exp-b, exp-noise")
        ->required();
    rep->add_option("--config-dir", config_dir, "directory with the preloaded configs");
    add_common(rep, rep_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const auto cfg = fepi::parse_experiment_file(sim_args.config);
            const auto run = fepi::run_experiment(cfg, overrides(sim_args));
            std::filesystem::create_directories(sim_args.out_dir);
            for (std::size_t j = 0; j < run.trajectories.size(); ++j) {
                const std::string path = sim_args.out_dir + "/" + cfg.name + "_regressor_" +
                                         std::to_string(j + 1) + ".csv";
                fepi::write_trajectory_csv(run.trajectories[j], path);
                std::cout << "wrote " << path << "\n";
            }
            return 0;
        }
        if (ana->parsed()) {
            const auto cfg = fepi::parse_experiment_file(ana_args.config);
            const auto run = fepi::run_experiment(cfg, overrides(ana_args));
            const auto analysis = fepi::analyze_experiment(run);
            std::cout << analysis.text;
            if (ana_args.out_dir != ".") {
                std::filesystem::create_directories(ana_args.out_dir);
                write_file(ana_args.out_dir + "/" + cfg.name + "_analysis.txt", analysis.text);
            }
            return 0;
        }
        if (ver->parsed()) {
            const auto cfg = fepi::parse_experiment_file(ver_args.config);
            const auto run = fepi::run_experiment(cfg, overrides(ver_args));
            const auto analysis = fepi::analyze_experiment(run);
            const auto verify = fepi::verify_experiment(run, analysis.report);
            std::cout << verify.text;
            if (ver_args.out_dir != ".") {
                std::filesystem::create_directories(ver_args.out_dir);
                write_file(ver_args.out_dir + "/" + cfg.name + "_verdicts.txt", verify.text);
                write_file(ver_args.out_dir + "/" + cfg.name + "_verdicts.csv", verify.csv);
            }
            return verify.ok ? 0 : kExitCheckFailed;
        }
        if (rep->parsed()) {
            const auto res =
                fepi::run_reproduce(experiment, rep_args.out_dir, config_dir, overrides(rep_args));
            std::cout << res.summary;
            return res.exit_code;
        }
    } catch (const fepi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const fepi::SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimulationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSimulationError;
    }
    return 0;
}
