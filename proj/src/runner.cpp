#include "hgteq/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hgteq/errors.hpp"
#include "hgteq/ess.hpp"
#include "hgteq/kernels.hpp"
#include "hgteq/numerics.hpp"
#include "hgteq/pde.hpp"
#include "hgteq/spectral.hpp"

namespace hgteq {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json config_json(const RunConfig& cfg) {
    json j;
    j["mode"] = mode_name(cfg.mode);
    j["kernel"] = cfg.kernel;
    j["out"] = cfg.out_dir;
    j["tau"] = cfg.tau;
    j["g"] = cfg.g;
    j["epsilon"] = cfg.epsilon;
    j["zmin"] = cfg.z_min;
    j["zmax"] = cfg.z_max;
    j["dz"] = cfg.dz;
    j["dt"] = cfg.dt;
    j["tmax"] = cfg.t_max;
    j["zinit"] = cfg.z_init;
    j["A"] = cfg.curvature;
    j["steady_tol"] = cfg.steady_tol;
    j["n_points"] = cfg.n_points;
    j["mu_min"] = cfg.mu_min;
    j["mu_max"] = cfg.mu_max;
    j["mu_step"] = cfg.mu_step;
    j["mu_values"] = cfg.mu_values;
    return j;
}

json ess_json(const DiscreteESS& e) {
    json j;
    j["points"] = e.points;
    j["weights"] = e.weights;
    j["rho0"] = e.rho0;
    j["morphism"] = e.morphism();
    return j;
}

struct EssOutcome {
    std::string regime;          // mono / di / tri / none
    std::optional<DiscreteESS> ess;
    std::string reason;          // why lesser regimes were rejected / failure
};

EssOutcome select_regime(const ModelParams& params, const KernelConstants& c,
                         const TransferKernel& kernel) {
    EssOutcome out;
    auto mono = monomorphic_ess(params, c);
    if (mono.valid()) {
        out.regime = "mono";
        out.ess = mono.ess;
        return out;
    }
    auto di = dimorphic_ess(params, c, kernel);
    if (di.valid()) {
        out.regime = "di";
        out.ess = di.ess;
        return out;
    }
    if (params.mu > c.mu2) {
        auto tri = trimorphic_ess(params, c, kernel);
        if (tri.converged()) {
            out.regime = "tri";
            out.ess = tri.ess;
            return out;
        }
        throw NumericalError("three-trait solve failed: " + tri.error);
    }
    out.regime = "none";
    out.reason = mono.invalid_reason + "; " + di.invalid_reason;
    return out;
}

void run_verify_kernel(const RunConfig& cfg, const std::filesystem::path& dir) {
    const TransferKernel kernel = make_kernel(cfg.kernel);
    const H1Report rep = validate_H1(kernel, default_h1_grid());
    json j;
    j["kernel"] = kernel.name;
    j["z_H"] = kernel.z_H;
    j["clauses"]["odd_bounded_increasing"] = rep.odd_bounded_increasing;
    j["clauses"]["normalized_concave"] = rep.normalized_concave;
    j["clauses"]["inflection_split"] = rep.inflection_split;
    j["clauses"]["derivative_consistency"] = rep.derivative_consistency;
    j["pass"] = rep.pass();
    write_json(dir / "kernel_report.json", j);
}

void run_eigen(const RunConfig& cfg, const std::filesystem::path& dir) {
    const EigenResult res =
        principal_eigen(cfg.epsilon, cfg.g, cfg.z_min, cfg.z_max, cfg.n_points);
    json j;
    j["lambda"] = res.lambda;
    j["epsilon"] = cfg.epsilon;
    j["g"] = cfg.g;
    j["domain"] = {res.domain_lo, res.domain_hi};
    j["n_points"] = res.n_points;
    j["residual"] = res.residual;
    write_json(dir / "eigen.json", j);
}

void run_ess(const RunConfig& cfg, const std::filesystem::path& dir) {
    const TransferKernel kernel = make_kernel(cfg.kernel);
    const KernelConstants constants = compute_constants(kernel);
    const ModelParams params = make_params(cfg.tau, cfg.g, cfg.epsilon);
    const EssOutcome outcome = select_regime(params, constants, kernel);

    json j;
    j["params"] = {{"tau", params.tau}, {"g", params.g}, {"mu", params.mu}};
    j["constants"] = {{"d1", constants.d1},   {"C1", constants.C1},
                      {"C2", constants.C2},   {"mu1", constants.mu1},
                      {"mu2", constants.mu2}, {"z3", constants.z3}};
    j["regime"] = outcome.regime;

    if (!outcome.ess) {
        j["valid"] = false;
        j["violated_condition"] = outcome.reason;
        j["points"] = json::array();
        j["weights"] = json::array();
        j["rho0"] = 0.0;
        j["morphism"] = 0;
        write_json(dir / "ess.json", j);
        return;
    }

    const DiscreteESS& ess = *outcome.ess;
    const VerifyReport rep = verify_ess(ess, params, kernel);
    j.update(ess_json(ess));
    j["valid"] = rep.valid;
    j["violated_condition"] = rep.violated;
    j["max_fitness_excursion"] = rep.max_fitness_excursion;
    j["excursion_z"] = rep.excursion_z;
    write_json(dir / "ess.json", j);

    // Fitness profile over the verification window.
    std::string csv = "z,F\n";
    const double lo = -2.0, hi = params.mu + 5.0, step = 1e-3;
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        const double z = lo + i * step;
        csv += format_double(z);
        csv += ',';
        csv += format_double(fitness_at(ess, params, kernel, z));
        csv += '\n';
    }
    write_text(dir / "fitness.csv", csv);
}

void run_simulate(const RunConfig& cfg, const std::filesystem::path& dir) {
    SimConfig sim;
    sim.params = make_params(cfg.tau, cfg.g, cfg.epsilon);
    sim.kernel = make_kernel(cfg.kernel);
    sim.grid = Grid1D::make(cfg.z_min, cfg.z_max, cfg.dz);
    sim.dt = cfg.dt;
    sim.t_max = cfg.t_max;
    sim.z_init = cfg.z_init;
    sim.curvature = cfg.curvature;
    sim.steady_tol = cfg.steady_tol;

    Simulator simulator(sim);
    const SimReport rep = simulator.run();

    std::string mass = "t,rho\n";
    for (std::size_t i = 0; i < rep.rho_history.size(); ++i) {
        mass += format_double(static_cast<double>(i) * sim.dt);
        mass += ',';
        mass += format_double(rep.rho_history[i]);
        mass += '\n';
    }
    write_text(dir / "mass.csv", mass);

    std::string profile = "z,u,n_rescaled\n";
    for (int j = 0; j < sim.grid.n_z; ++j) {
        profile += format_double(sim.grid.node(j));
        profile += ',';
        profile += format_double(rep.u_final[j]);
        profile += ',';
        profile += format_double(rep.n_rescaled[j]);
        profile += '\n';
    }
    write_text(dir / "profile.csv", profile);

    json j;
    j["support"] = rep.support;
    j["steady"] = rep.steady;
    j["steps_taken"] = rep.steps_taken;
    j["rho_final"] = rep.rho_final;
    j["max_u"] = rep.max_u;
    j["mean_growth"] = rep.mean_growth;
    j["threads"] = 1;
    j["params"] = {{"tau", sim.params.tau},
                   {"g", sim.params.g},
                   {"epsilon", sim.params.epsilon},
                   {"mu", sim.params.mu}};
    j["grid"] = {{"zmin", sim.grid.z_min},
                 {"zmax", sim.grid.z_max},
                 {"dz", sim.grid.dz},
                 {"n_z", sim.grid.n_z}};
    write_json(dir / "report.json", j);
}

void append_cell(std::string& csv, double v) {
    csv += format_double(v);
}

void run_sweep(const RunConfig& cfg, const std::filesystem::path& dir) {
    const TransferKernel kernel = make_kernel(cfg.kernel);
    const KernelConstants constants = compute_constants(kernel);

    std::string csv = "mu,g,z1,z2,z3,a1_frac,a2_frac,a3_frac,rho0,regime\n";
    for (double mu : sweep_mus(cfg)) {
        const double g = cfg.tau / (2.0 * mu);
        const ModelParams params = make_params(cfg.tau, g, cfg.epsilon);
        const EssOutcome outcome = select_regime(params, constants, kernel);

        append_cell(csv, mu);
        csv += ',';
        append_cell(csv, g);
        const int morph = outcome.ess ? outcome.ess->morphism() : 0;
        for (int i = 0; i < 3; ++i) {
            csv += ',';
            if (i < morph) append_cell(csv, outcome.ess->points[i]);
        }
        for (int i = 0; i < 3; ++i) {
            csv += ',';
            if (i < morph)
                append_cell(csv, outcome.ess->weights[i] / outcome.ess->rho0);
        }
        csv += ',';
        if (outcome.ess) append_cell(csv, outcome.ess->rho0);
        csv += ',';
        csv += outcome.regime;
        csv += '\n';
    }
    write_text(dir / "sweep.csv", csv);
}

} // namespace

void run_scenario(const RunConfig& cfg) {
    validate_config(cfg);
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_json(dir / "config_echo.json", config_json(cfg));
    switch (cfg.mode) {
        case RunMode::verify_kernel: run_verify_kernel(cfg, dir); break;
        case RunMode::eigen: run_eigen(cfg, dir); break;
        case RunMode::ess: run_ess(cfg, dir); break;
        case RunMode::simulate: run_simulate(cfg, dir); break;
        case RunMode::sweep: run_sweep(cfg, dir); break;
    }
}

int run_scenario_catching(const RunConfig& cfg) {
    try {
        run_scenario(cfg);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << json{{"error", e.what()}, {"type", "config"}}.dump() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << json{{"error", e.what()}, {"type", "numerical"}}.dump() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"type", "internal"}}.dump() << "\n";
        return kExitNumerical;
    }
}

} // namespace hgteq
