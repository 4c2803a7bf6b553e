// Command-line front end: evolutionary equilibria of the
// selection-mutation-transfer model and the matching time-dependent solver.
//
// Subcommands: ess, simulate, eigen, sweep, verify-kernel. Each accepts
// --config FILE with flat key=value lines; command-line flags override the
// file. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "hgteq/config.hpp"
#include "hgteq/runner.hpp"

namespace {

using hgteq::RunConfig;
using hgteq::RunMode;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path,
                    "flat key=value configuration file; flags override it");
    cmd->add_option("--out", cfg.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--kernel", cfg.kernel, "transfer kernel (tanh, arctan)")
        ->capture_default_str();
    cmd->add_option("--tau", cfg.tau, "transfer rate")->capture_default_str();
    cmd->add_option("--g", cfg.g, "selection strength")->capture_default_str();
    cmd->add_option("--epsilon", cfg.epsilon, "mutational scale")
        ->capture_default_str();
}

void add_grid_time(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--zmin", cfg.z_min, "left trait boundary")->capture_default_str();
    cmd->add_option("--zmax", cfg.z_max, "right trait boundary")->capture_default_str();
    cmd->add_option("--dz", cfg.dz, "trait step")->capture_default_str();
    cmd->add_option("--dt", cfg.dt, "time step")->capture_default_str();
    cmd->add_option("--tmax", cfg.t_max, "time horizon")->capture_default_str();
    cmd->add_option("--zinit", cfg.z_init, "initial peak location")
        ->capture_default_str();
    cmd->add_option("--A", cfg.curvature, "initial peak curvature")
        ->capture_default_str();
    cmd->add_option("--steady-tol", cfg.steady_tol,
                    "steady-state tolerance on max |du/dt|")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary equilibria under selection, mutation and "
                 "horizontal transfer"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    // The subcommand fixes the mode (and its grid defaults) before the
    // config file is applied, so precedence is defaults < file < flags.
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "ess") cfg.mode = RunMode::ess;
        else if (arg == "simulate") cfg.mode = RunMode::simulate;
        else if (arg == "eigen") cfg.mode = RunMode::eigen;
        else if (arg == "sweep") cfg.mode = RunMode::sweep;
        else if (arg == "verify-kernel") cfg.mode = RunMode::verify_kernel;
        else continue;
        break;
    }
    if (cfg.mode == RunMode::eigen) {
        cfg.z_min = -10.0;
        cfg.z_max = 10.0;
    }
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }
    if (!config_path.empty()) {
        try {
            hgteq::apply_config_file(cfg, config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return hgteq::kExitConfig;
        }
    }

    CLI::App* ess = app.add_subcommand(
        "ess", "closed-form / Newton equilibrium for given tau, g");
    add_common(ess, cfg, config_path);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "time-dependent run of the rescaled model");
    add_common(simulate, cfg, config_path);
    add_grid_time(simulate, cfg);

    CLI::App* eigen = app.add_subcommand(
        "eigen", "principal eigenvalue of the no-transfer operator");
    add_common(eigen, cfg, config_path);
    eigen->add_option("--zmin", cfg.z_min, "left domain boundary");
    eigen->add_option("--zmax", cfg.z_max, "right domain boundary");
    eigen->add_option("--n-points", cfg.n_points, "grid nodes (boundaries included)")
        ->capture_default_str();

    CLI::App* sweep = app.add_subcommand(
        "sweep", "equilibrium per transfer-to-selection ratio at fixed tau");
    add_common(sweep, cfg, config_path);
    sweep->add_option("--mu-min", cfg.mu_min, "smallest ratio")->capture_default_str();
    sweep->add_option("--mu-max", cfg.mu_max, "largest ratio")->capture_default_str();
    sweep->add_option("--mu-step", cfg.mu_step, "ratio increment")
        ->capture_default_str();
    sweep->add_option("--mu-values", cfg.mu_values,
                      "explicit ratio list (overrides the range)")
        ->delimiter(',');

    CLI::App* verify = app.add_subcommand(
        "verify-kernel", "structural hypothesis report for a kernel");
    add_common(verify, cfg, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? hgteq::kExitOk : hgteq::kExitConfig;
    }

    return hgteq::run_scenario_catching(cfg);
}
