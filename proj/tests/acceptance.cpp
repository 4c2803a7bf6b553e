// Acceptance suite: one numbered criterion per run, printing a PASS/FAIL
// line with the elapsed wall time. With no arguments, criteria 1-9 run in
// order; `extended` (or 10) runs the long three-trait simulation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "hgteq/ess.hpp"
#include "hgteq/kernels.hpp"
#include "hgteq/pde.hpp"
#include "hgteq/spectral.hpp"

using namespace hgteq;

namespace {

struct Checker {
    bool ok = true;
    std::string first_failure;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        expect(std::fabs(got - want) <= tol,
               what + ": got " + std::to_string(got) + ", want " +
                   std::to_string(want) + " +- " + std::to_string(tol));
    }
};

const TransferKernel& kernel() {
    static TransferKernel k = make_kernel("tanh");
    return k;
}

const KernelConstants& constants() {
    static KernelConstants c = compute_constants(kernel());
    return c;
}

SimConfig scenario(double tau, double g, double eps, double dz, double dt,
                   double t_max) {
    SimConfig cfg;
    cfg.params = make_params(tau, g, eps);
    cfg.kernel = kernel();
    cfg.grid = Grid1D::make(-2.0, 6.0, dz);
    cfg.dt = dt;
    cfg.t_max = t_max;
    return cfg;
}

// Shared steady-state diagnostics applied to every converged simulation.
// The stationary mass bound is lambda_eps - tau <= rho <= 1 + tau with 0.05
// discretization slack on both sides; the ground value lambda_eps comes from
// the spectral module at matching resolution (it equals 1 only as eps -> 0).
void check_steady_identities(Checker& c, const SimReport& rep, double tau,
                             double g, double eps, const std::string& tag) {
    c.expect(rep.steady, tag + ": run did not reach the steady tolerance");
    c.expect(std::fabs(rep.max_u) <= 20.0 * eps * std::fabs(std::log(eps)),
             tag + ": |max u| exceeds 20 eps |ln eps|");
    c.expect(std::fabs(rep.mean_growth - rep.rho_final) <= 1e-2 * rep.rho_final,
             tag + ": growth integral deviates from rho^2 beyond 1e-2 relative");
    const double h = std::min(1e-2, std::sqrt(eps) / 20.0);
    const int n_points = static_cast<int>(std::llround(20.0 / h)) + 1;
    const double lambda = principal_eigen(eps, g, -10.0, 10.0, n_points).lambda;
    c.expect(rep.rho_final >= lambda - tau - 0.05 &&
                 rep.rho_final <= 1.0 + tau + 0.05,
             tag + ": rho outside [lambda - tau - 0.05, 1 + tau + 0.05]");
}

// ---- criteria -------------------------------------------------------------

void criterion1(Checker& c) {
    const KernelConstants& k = constants();
    c.expect_near(k.d1, 1.6061, 1e-3, "d1");
    c.expect_near(k.mu1, 1.887, 2e-3, "mu1");
    // independent bisection oracles, frozen
    c.expect_near(k.d1, 1.6061152988027674, 1e-9, "d1 vs oracle");
    c.expect_near(k.mu1, 1.8869699070857536, 1e-9, "mu1 vs oracle");
    c.expect(k.d1 > kernel().z_H, "d1 > z_H");
    c.expect(k.mu1 < 2.0, "mu1 < 2");
}

void criterion2(Checker& c) {
    const KernelConstants& k = constants();
    c.expect_near(k.mu2, 4.03729, 1e-3, "mu2");
    c.expect_near(k.z3, 0.513, 5e-3, "z3");
}

void criterion3(Checker& c) {
    // mu, g, z1, z2, z3, a1/rho, a2/rho, a3/rho, rho0. The z1 cell of the
    // mu = 5 row is the verified root 3.5496 of the stationarity system
    // (the system's own first-order condition rejects the printed 3.5396).
    struct Row { double mu, g, z1, z2, z3, f1, f2, f3, rho; };
    const Row rows[] = {
        {4.03729, 0.0619, 3.125, 1.52, 0.515, 0.7337, 0.2663, 0.0, 0.513},
        {4.16, 0.06, 3.181, 1.581, 0.5532, 0.723, 0.2662, 0.011, 0.52},
        {4.31, 0.058, 3.2453, 1.6521, 0.6001, 0.7119, 0.2663, 0.0218, 0.5225},
        {4.386, 0.057, 3.2791, 1.689, 0.6254, 0.7063, 0.2664, 0.0273, 0.5232},
        {5.0, 0.05, 3.5496, 1.98, 0.8439, 0.6662, 0.2675, 0.0663, 0.5255},
        {5.2632, 0.0475, 3.6641, 2.1014, 0.9424, 0.6516, 0.268, 0.0804, 0.5248},
        {6.25, 0.04, 4.0893, 2.5467, 1.3268, 0.6073, 0.2696, 0.1232, 0.5152},
        {6.3176, 0.0396, 4.1183, 2.5728, 1.3537, 0.6047, 0.2697, 0.1256, 0.5142},
    };
    for (const Row& r : rows) {
        const ModelParams p = make_params(2.0 * r.g * r.mu, r.g);
        const auto t = trimorphic_ess(p, constants(), kernel());
        c.expect(t.converged(), "Newton row mu = " + std::to_string(r.mu));
        if (!t.converged()) continue;
        const DiscreteESS& e = *t.ess;
        const std::string tag = "row mu = " + std::to_string(r.mu) + " ";
        c.expect_near(e.points[0], r.z1, 1e-2, tag + "z1");
        c.expect_near(e.points[1], r.z2, 1e-2, tag + "z2");
        c.expect_near(e.points[2], r.z3, 1e-2, tag + "z3");
        c.expect_near(e.weights[0] / e.rho0, r.f1, 1e-2, tag + "a1/rho");
        c.expect_near(e.weights[1] / e.rho0, r.f2, 1e-2, tag + "a2/rho");
        c.expect_near(e.weights[2] / e.rho0, r.f3, 1e-2, tag + "a3/rho");
        c.expect_near(e.rho0, r.rho, 1e-2, tag + "rho0");
    }
    // the last row is past the three-trait regime: a fourth near-zero of the
    // fitness appears near z = 0.7123 and verification fails
    const ModelParams p = make_params(2.0 * 0.0396 * 6.3176, 0.0396);
    const auto t = trimorphic_ess(p, constants(), kernel());
    c.expect(t.converged(), "Newton at mu = 6.3176");
    if (t.converged()) {
        const VerifyReport rep = verify_ess(*t.ess, p, kernel());
        c.expect(!rep.valid, "mu = 6.3176 candidate must fail verification");
        c.expect_near(rep.excursion_z, 0.7123, 5e-2, "fourth near-zero location");
    }
}

void criterion4(Checker& c) {
    const KernelConstants& k = constants();
    const double tau = 0.5;
    for (int i = 1; i <= 50; ++i) {
        const double mu = k.mu1 + (k.mu2 - k.mu1) * i / 50.0;
        const ModelParams p = make_params(tau, tau / (2.0 * mu));
        const auto e = dimorphic_ess(p, k, kernel());
        c.expect(e.valid(), "dimorphic validity at mu = " + std::to_string(mu));
        if (!e.valid()) continue;
        const double z1 = e.ess->points[0], z2 = e.ess->points[1];
        const double a = e.ess->weights[0], b = e.ess->weights[1];
        const double rho = e.ess->rho0;
        const double r1 = 1.0 - p.g * z1 * z1 - rho + b / rho * tau * kernel().H(z1 - z2);
        const double r2 = 1.0 - p.g * z2 * z2 - rho + a / rho * tau * kernel().H(z2 - z1);
        const double r3 = -2.0 * p.g * z1 + tau / rho * (a + b * kernel().dH(z1 - z2));
        const double r4 = -2.0 * p.g * z2 + tau / rho * (b + a * kernel().dH(z2 - z1));
        const double res = std::max({std::fabs(r1), std::fabs(r2), std::fabs(r3),
                                     std::fabs(r4)});
        c.expect(res <= 1e-9, "stationarity residual at mu = " + std::to_string(mu));
        c.expect(std::fabs(z1 - z2 - k.d1) <= 1e-12,
                 "peak distance at mu = " + std::to_string(mu));
    }
    for (int i = 1; i <= 10; ++i) {
        const double mu = k.mu1 * i / 10.0;
        const ModelParams p = make_params(tau, tau / (2.0 * mu));
        const auto e = monomorphic_ess(p, k);
        c.expect(e.valid(), "monomorphic validity at mu = " + std::to_string(mu));
        if (!e.valid()) continue;
        const double z0 = e.ess->points[0];
        const double f = fitness_at(*e.ess, p, kernel(), z0);
        const double h = 1e-6;
        const double df = (fitness_at(*e.ess, p, kernel(), z0 + h) -
                           fitness_at(*e.ess, p, kernel(), z0 - h)) / (2.0 * h);
        c.expect(std::fabs(f) <= 1e-9, "F(z0) at mu = " + std::to_string(mu));
        c.expect(std::fabs(df) <= 1e-9, "F'(z0) at mu = " + std::to_string(mu));
    }
}

void criterion5_coarse(Checker& c) {
    SimConfig cfg = scenario(0.5, 1.0, 1e-2, 2e-2, 1e-4, 60.0);
    const SimReport rep = Simulator(cfg).run();
    c.expect(rep.support.size() == 1, "coarse: expected a single peak");
    if (rep.support.size() == 1)
        c.expect_near(rep.support[0], 0.25, 5e-2, "coarse: peak location");
    c.expect_near(rep.rho_final, 0.9375, 5e-2, "coarse: steady mass");
    check_steady_identities(c, rep, 0.5, 1.0, 1e-2, "coarse");
}

void criterion5_full(Checker& c) {
    SimConfig cfg = scenario(0.5, 1.0, 5e-5, 1e-2, 1e-4, 60.0);
    const SimReport rep = Simulator(cfg).run();
    c.expect(rep.support.size() == 1, "full: expected a single peak");
    if (rep.support.size() == 1)
        c.expect_near(rep.support[0], 0.25, 2.0 * cfg.grid.dz, "full: peak location");
    c.expect_near(rep.rho_final, 0.9375, 1e-2, "full: steady mass");
    check_steady_identities(c, rep, 0.5, 1.0, 5e-5, "full");
}

void criterion6(Checker& c) {
    SimConfig cfg = scenario(0.5, 0.065, 5e-5, 1e-2, 1e-4, 300.0);
    const SimReport rep = Simulator(cfg).run();
    c.expect(rep.support.size() == 2,
             "expected exactly two peaks, got " + std::to_string(rep.support.size()));
    if (rep.support.size() == 2) {
        c.expect_near(rep.support[0], 1.407, 5.0 * cfg.grid.dz, "lower peak");
        c.expect_near(rep.support[1], 3.013, 5.0 * cfg.grid.dz, "upper peak");
    }
    c.expect_near(rep.rho_final, 0.527, 2e-2, "steady mass");
    // stepwise transient: the mass dips strictly below its final value
    bool dip = false;
    const auto& rh = rep.rho_history;
    for (std::size_t i = 1; i + 1 < rh.size(); ++i) {
        if (rh[i] < rh[i - 1] && rh[i] < rh[i + 1] && rh[i] < rep.rho_final - 1e-3) {
            dip = true;
            break;
        }
    }
    c.expect(dip, "mass history has no local minimum below the final value");
    check_steady_identities(c, rep, 0.5, 0.065, 5e-5, "dimorphic");
}

void criterion7(Checker& c) {
    for (double eps : {0.1, 0.05}) {
        SimConfig cfg = scenario(0.0, 1.0, eps, 1e-2, 1e-4, 60.0);
        const SimReport rep = Simulator(cfg).run();
        const double lam = principal_eigen(eps, 1.0, -10.0, 10.0, 4001).lambda;
        const std::string tag = "eps = " + std::to_string(eps);
        c.expect(std::fabs(rep.rho_final - lam) <= 1e-2,
                 tag + ": steady mass vs ground value");
        c.expect(std::fabs(lam - (1.0 - eps)) <= 1e-3,
                 tag + ": ground value vs oscillator");
        check_steady_identities(c, rep, 0.0, 1.0, eps, tag);
    }
}

void criterion8(Checker& c) {
    {
        SimConfig cfg = scenario(0.5, 1.0, 1e-2, 2e-2, 1e-4, 60.0);
        check_steady_identities(c, Simulator(cfg).run(), 0.5, 1.0, 1e-2, "tau = 0.5");
    }
    for (double eps : {0.1, 0.05}) {
        SimConfig cfg = scenario(0.0, 1.0, eps, 1e-2, 1e-4, 60.0);
        check_steady_identities(c, Simulator(cfg).run(), 0.0, 1.0, eps,
                                "tau = 0, eps = " + std::to_string(eps));
    }
}

void criterion9(Checker& c) {
    c.expect_near(solve_mass_equation(0.0, 1.0), 0.567143, 1e-6, "mass fixed point");
    const Grid1D grid = Grid1D::make(-1.0, 1.0, 0.25);
    std::vector<double> sq(grid.n_z), cube(grid.n_z);
    for (int j = 0; j < grid.n_z; ++j) {
        sq[j] = grid.node(j) * grid.node(j);
        cube[j] = sq[j] * grid.node(j);
    }
    const auto lap_sq = laplacian(sq, grid.dz);
    const auto lap_cube = laplacian(cube, grid.dz);
    for (int j = 0; j < grid.n_z; ++j) {
        c.expect(std::fabs(lap_sq[j] - 2.0) <= 1e-10, "second difference on z^2");
        c.expect(std::fabs(lap_cube[j] - 6.0 * grid.node(j)) <= 1e-9,
                 "second difference on z^3");
    }
    c.expect(grad_sq({1.0, 0.0, 1.0}, 1.0)[1] == 1.0, "gradient branch (1,0,1)");
    c.expect(grad_sq({0.0, 1.0, 2.0}, 1.0)[1] == 1.0, "gradient branch (0,1,2)");
    c.expect(grad_sq({2.0, 1.0, 0.0}, 1.0)[1] == 1.0, "gradient branch (2,1,0)");
}

void criterion_extended(Checker& c) {
    // three-trait settling at mu = 5; targets from the stationarity table
    SimConfig cfg = scenario(0.5, 0.05, 5e-4, 1e-2, 1e-4, 400.0);
    const SimReport rep = Simulator(cfg).run();
    c.expect(rep.support.size() == 3,
             "expected three peaks, got " + std::to_string(rep.support.size()));
    if (rep.support.size() == 3) {
        c.expect_near(rep.support[0], 0.8439, 5.0 * cfg.grid.dz, "lowest peak");
        c.expect_near(rep.support[1], 1.98, 5.0 * cfg.grid.dz, "middle peak");
        c.expect_near(rep.support[2], 3.5496, 5.0 * cfg.grid.dz, "highest peak");
    }
    c.expect_near(rep.rho_final, 0.5255, 2e-2, "steady mass");
    check_steady_identities(c, rep, 0.5, 0.05, 5e-4, "trimorphic");
}

struct Criterion {
    std::string id;
    std::string description;
    std::function<void(Checker&)> fn;
    double budget_seconds;   // 0 = no hard budget
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {"1", "kernel constants d1, mu1 with the structural bounds", criterion1, 1.0},
        {"2", "two-to-three trait threshold mu2 and third zero z3", criterion2, 30.0},
        {"3", "stationarity table regression and the tetramorphic rejection",
         criterion3, 120.0},
        {"4", "closed-form residual sweep across both regimes", criterion4, 10.0},
        {"5c", "single-peak settling, coarse variant", criterion5_coarse, 60.0},
        {"5f", "single-peak settling, full resolution", criterion5_full, 0.0},
        {"6", "two-peak settling with the oscillating transient", criterion6, 0.0},
        {"7", "no-transfer mass against the ground value", criterion7, 60.0},
        {"8", "steady-state identities on converged runs", criterion8, 0.0},
        {"9", "scheme unit oracles (mass root, ghosts, gradient branches)",
         criterion9, 1.0},
        {"extended", "three-peak settling at desk scale", criterion_extended, 600.0},
    };
    return list;
}

bool run_one(const Criterion& cr) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
        cr.fn(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_seconds > 0.0 && elapsed >= cr.budget_seconds)
        c.expect(false, "runtime budget exceeded: " + std::to_string(elapsed) +
                            " s >= " + std::to_string(cr.budget_seconds) + " s");
    std::printf("[%s] C%s: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL",
                cr.id.c_str(), cr.description.c_str(), elapsed,
                c.ok ? "" : " -- ", c.ok ? "" : c.first_failure.c_str());
    std::fflush(stdout);
    return c.ok;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted;
    for (int i = 1; i < argc; ++i) wanted.emplace_back(argv[i]);
    if (wanted.empty())
        wanted = {"1", "2", "3", "4", "5c", "5f", "6", "7", "8", "9"};

    bool all_ok = true;
    for (const std::string& id : wanted) {
        bool found = false;
        for (const Criterion& cr : criteria()) {
            if (cr.id == id || (id == "10" && cr.id == "extended") ||
                (id == "5" && (cr.id == "5c" || cr.id == "5f"))) {
                found = true;
                if (!run_one(cr)) all_ok = false;
            }
        }
        if (!found) {
            std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
            return 2;
        }
    }
    return all_ok ? 0 : 1;
}
