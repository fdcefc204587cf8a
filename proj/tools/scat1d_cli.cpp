// Command-line runner for the two-scale scattering experiments.
//
// Subcommands: sweep | scaled | convergence | pole | decay | check.
// Exit codes: 0 = success (verdict passed where one exists), 2 = a verdict
// failed, 1 = execution error (bad config, solver failure, I/O).

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scat1d/scat1d.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    double tol = 0.0;
};

void add_common_options(CLI::App* sub, CliArgs& args) {
    sub->add_option("--config", args.config_path, "Path to the experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir, "Output directory (overrides the config's out_dir)");
    sub->add_option("--workers", args.workers, "Worker threads (0 = auto)");
    sub->add_option("--tol", args.tol, "Override the verdict tolerance of this command");
}

scat1d::ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw scat1d::ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return scat1d::parse_config_text(buf.str());
}

void require_kind(const scat1d::ExperimentConfig& cfg,
                  std::initializer_list<scat1d::ExperimentKind> allowed,
                  const std::string& sub) {
    for (scat1d::ExperimentKind k : allowed)
        if (cfg.kind == k) return;
    throw scat1d::ConfigError("config kind '" + std::string(scat1d::kind_label(cfg.kind)) +
                              "' does not match subcommand '" + sub + "'");
}

int finish(const scat1d::RunOutcome& outcome) {
    for (const auto& o : outcome.manifest.outputs)
        std::cout << "wrote " << o.path << " (" << o.bytes << " bytes)\n";
    if (!outcome.manifest.skipped_points.empty())
        std::cout << outcome.manifest.skipped_points.size()
                  << " grid point(s) skipped; see manifest.json\n";
    if (!outcome.note.empty()) std::cout << outcome.note << "\n";
    if (!outcome.verdict_pass) {
        std::cout << "verdict: FAIL\n";
        return 2;
    }
    std::cout << "verdict: PASS\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    using scat1d::ExperimentKind;
    CLI::App app{std::string(scat1d::kToolName) +
                 " - scattering experiments for two-scale 1D potentials"};
    app.set_version_flag("--version", std::string(scat1d::kToolVersion));
    app.require_subcommand(1);

    CliArgs args;
    CLI::App* sweep = app.add_subcommand("sweep", "Transmission tables over a real k grid");
    CLI::App* scaled = app.add_subcommand("scaled", "Scaled transmission vs the point limit");
    CLI::App* conv = app.add_subcommand("convergence", "Effective-well convergence ladder");
    CLI::App* pole = app.add_subcommand("pole", "Resolvent pole and eigenvalue study");
    CLI::App* decay = app.add_subcommand("decay", "Dispersive decay run with crossover fit");
    CLI::App* check = app.add_subcommand("check", "Validate a config and its hypotheses");
    for (CLI::App* sub : {sweep, scaled, conv, pole, decay, check})
        add_common_options(sub, args);

    CLI11_PARSE(app, argc, argv);

    try {
        scat1d::ExperimentConfig cfg = load_config(args.config_path);
        scat1d::RunOptions opt;
        opt.out_dir_override = args.out_dir;
        opt.workers = args.workers;
        opt.tol = args.tol;

        scat1d::RunOutcome outcome;
        if (sweep->parsed()) {
            require_kind(cfg, {ExperimentKind::sweep, ExperimentKind::figure1}, "sweep");
            outcome = scat1d::run_sweep(cfg, opt);
        } else if (scaled->parsed()) {
            require_kind(cfg, {ExperimentKind::figure1, ExperimentKind::figure2}, "scaled");
            outcome = scat1d::run_scaled(cfg, opt);
        } else if (conv->parsed()) {
            require_kind(cfg, {ExperimentKind::convergence}, "convergence");
            outcome = scat1d::run_convergence(cfg, opt);
        } else if (pole->parsed()) {
            require_kind(cfg, {ExperimentKind::pole_study}, "pole");
            outcome = scat1d::run_pole(cfg, opt);
        } else if (decay->parsed()) {
            require_kind(cfg, {ExperimentKind::decay}, "decay");
            outcome = scat1d::run_decay(cfg, opt);
        } else {
            outcome = scat1d::run_check(cfg, opt);
        }
        return finish(outcome);
    } catch (const scat1d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const scat1d::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
