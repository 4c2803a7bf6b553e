#include "hgteq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hgteq/errors.hpp"
#include "hgteq/kernels.hpp"
#include "hgteq/numerics.hpp"
#include "hgteq/pde.hpp"

namespace hgteq {

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::ess: return "ess";
        case RunMode::simulate: return "simulate";
        case RunMode::eigen: return "eigen";
        case RunMode::sweep: return "sweep";
        case RunMode::verify_kernel: return "verify-kernel";
    }
    return "?";
}

namespace {

void require(bool ok, const std::string& field, const std::string& constraint,
             double got) {
    if (!ok)
        throw ConfigError(field + ": must be " + constraint + " (got " +
                          format_double(got) + ")");
}

} // namespace

void validate_config(const RunConfig& cfg) {
    const auto& names = supported_kernels();
    if (std::find(names.begin(), names.end(), cfg.kernel) == names.end())
        make_kernel(cfg.kernel);   // throws with the supported list

    require(std::isfinite(cfg.tau) && cfg.tau >= 0.0, "tau", ">= 0", cfg.tau);
    require(std::isfinite(cfg.g) && cfg.g > 0.0, "g", "> 0", cfg.g);
    require(std::isfinite(cfg.epsilon) && cfg.epsilon > 0.0, "epsilon", "> 0",
            cfg.epsilon);

    switch (cfg.mode) {
        case RunMode::simulate:
            require(cfg.dt > 0.0, "dt", "> 0", cfg.dt);
            require(cfg.t_max > 0.0, "tmax", "> 0", cfg.t_max);
            require(cfg.steady_tol > 0.0, "steady-tol", "> 0", cfg.steady_tol);
            require(cfg.curvature > 0.0, "A", "> 0", cfg.curvature);
            Grid1D::make(cfg.z_min, cfg.z_max, cfg.dz);   // divisibility, n_z >= 8
            require(cfg.z_init >= cfg.z_min && cfg.z_init <= cfg.z_max, "zinit",
                    "inside [zmin, zmax]", cfg.z_init);
            break;
        case RunMode::eigen:
            require(cfg.n_points >= 50, "n-points", ">= 50",
                    static_cast<double>(cfg.n_points));
            require(cfg.z_max > cfg.z_min, "zmax", "> zmin", cfg.z_max);
            break;
        case RunMode::sweep:
            if (cfg.mu_values.empty()) {
                require(cfg.mu_min > 0.0, "mu-min", "> 0", cfg.mu_min);
                require(cfg.mu_max >= cfg.mu_min, "mu-max", ">= mu-min", cfg.mu_max);
                require(cfg.mu_step > 0.0, "mu-step", "> 0", cfg.mu_step);
            } else {
                for (double m : cfg.mu_values)
                    require(std::isfinite(m) && m > 0.0, "mu-values", "> 0", m);
            }
            require(cfg.tau > 0.0, "tau", "> 0 in sweep mode", cfg.tau);
            break;
        case RunMode::ess:
        case RunMode::verify_kernel:
            break;
    }
}

std::vector<double> sweep_mus(const RunConfig& cfg) {
    std::vector<double> mus = cfg.mu_values;
    if (mus.empty()) {
        for (double m = cfg.mu_min; m <= cfg.mu_max + 1e-12; m += cfg.mu_step)
            mus.push_back(m);
    }
    std::sort(mus.begin(), mus.end());
    return mus;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw ConfigError(key + ": expected a number (got '" + value + "')");
    return v;
}

} // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "mode") {
            if (value != mode_name(cfg.mode))
                throw ConfigError("mode: file says '" + value +
                                  "' but the subcommand is '" +
                                  mode_name(cfg.mode) + "'");
        } else if (key == "kernel") {
            cfg.kernel = value;
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "mu-values" || key == "mu_values") {
            cfg.mu_values.clear();
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ','))
                cfg.mu_values.push_back(parse_number(key, trim(item)));
        } else {
            const double v = parse_number(key, value);
            if (key == "tau") cfg.tau = v;
            else if (key == "g") cfg.g = v;
            else if (key == "epsilon") cfg.epsilon = v;
            else if (key == "zmin") cfg.z_min = v;
            else if (key == "zmax") cfg.z_max = v;
            else if (key == "dz") cfg.dz = v;
            else if (key == "dt") cfg.dt = v;
            else if (key == "tmax") cfg.t_max = v;
            else if (key == "zinit") cfg.z_init = v;
            else if (key == "A") cfg.curvature = v;
            else if (key == "steady-tol" || key == "steady_tol") cfg.steady_tol = v;
            else if (key == "n-points" || key == "n_points")
                cfg.n_points = static_cast<int>(std::llround(v));
            else if (key == "mu-min" || key == "mu_min") cfg.mu_min = v;
            else if (key == "mu-max" || key == "mu_max") cfg.mu_max = v;
            else if (key == "mu-step" || key == "mu_step") cfg.mu_step = v;
            else
                throw ConfigError("config: unknown key '" + key + "'");
        }
    }
}

} // namespace hgteq
