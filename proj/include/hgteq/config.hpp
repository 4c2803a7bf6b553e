#ifndef HGTEQ_CONFIG_HPP
#define HGTEQ_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

namespace hgteq {

enum class RunMode { ess, simulate, eigen, sweep, verify_kernel };

const char* mode_name(RunMode m);

// Fully-resolved run description. Every run echoes this back (defaults
// included) as config_echo.json in the output directory.
struct RunConfig {
    RunMode mode = RunMode::ess;
    std::string kernel = "tanh";
    std::string out_dir = ".";

    double tau = 0.5;
    double g = 1.0;
    double epsilon = 1e-3;

    // simulate
    double z_min = -2.0;
    double z_max = 6.0;
    double dz = 1e-2;
    double dt = 1e-4;
    double t_max = 200.0;
    double z_init = 0.0;
    double curvature = 1.0;
    double steady_tol = 1e-7;

    // eigen (z_min / z_max double as the domain; default [-10, 10])
    int n_points = 4001;

    // sweep
    double mu_min = 0.1;
    double mu_max = 5.0;
    double mu_step = 0.1;
    std::vector<double> mu_values;   // explicit list; overrides the range
};

// Validates ranges and cross-field constraints; throws ConfigError naming
// the offending field and the accepted range.
void validate_config(const RunConfig& cfg);

// Resolved list of sweep ratios, ascending.
std::vector<double> sweep_mus(const RunConfig& cfg);

// Applies a flat key=value configuration file ('#' starts a comment; keys
// carry the long flag names, e.g. tau, g, dz, steady-tol, mu-values). An
// optional `mode` key must agree with the subcommand. Command-line flags
// override anything set here.
void apply_config_file(RunConfig& cfg, const std::string& path);

} // namespace hgteq

#endif
