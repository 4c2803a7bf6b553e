#include "hgteq/ess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hgteq/errors.hpp"
#include "hgteq/numerics.hpp"
#include "hgteq/rootfind.hpp"

namespace hgteq {

namespace {

// G(z) = 2 H(z) - z (1 + H'(z)); its unique positive root is d1.
double gap_function(const TransferKernel& k, double z) {
    return 2.0 * k.H(z) - z * (1.0 + k.dH(z));
}

double gap_function_deriv(const TransferKernel& k, double z) {
    return k.dH(z) - 1.0 - z * k.d2H(z);
}

struct DimorphicShape {
    double z1, z2, frac_a, frac_b;
};

// Support points and weight fractions of the two-trait candidate at ratio mu.
DimorphicShape dimorphic_shape(const KernelConstants& c, double mu) {
    DimorphicShape s;
    s.z1 = mu * (1.0 - 0.5 * c.C1) + 0.5 * c.d1;
    s.z2 = s.z1 - c.d1;
    s.frac_a = 0.5 * (1.0 + c.mu1 / mu);
    s.frac_b = 0.5 * (1.0 - c.mu1 / mu);
    return s;
}

} // namespace

double dimorphic_fitness_shape(const TransferKernel& kernel,
                               const KernelConstants& c, double mu, double z) {
    const DimorphicShape s = dimorphic_shape(c, mu);
    const double Hd1 = kernel.H(c.d1);
    return s.z1 * s.z1 - z * z - (mu - c.mu1) * Hd1 +
           2.0 * mu * (s.frac_a * kernel.H(z - s.z1) + s.frac_b * kernel.H(z - s.z2));
}

namespace {

// Maximum of the two-trait fitness shape outside radius-0.1 neighborhoods of
// the support: grid scan at step 1e-3 refined by golden section when the
// best point is interior.
std::pair<double, double> off_support_max(const TransferKernel& kernel,
                                          const KernelConstants& c, double mu) {
    const DimorphicShape s = dimorphic_shape(c, mu);
    const double lo = -2.0, hi = s.z1 + 5.0, step = 1e-3;
    const auto excluded = [&](double z) {
        return std::fabs(z - s.z1) < 0.1 || std::fabs(z - s.z2) < 0.1;
    };
    const auto J = [&](double z) { return dimorphic_fitness_shape(kernel, c, mu, z); };

    double best = -std::numeric_limits<double>::infinity();
    double best_z = lo;
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        const double z = lo + i * step;
        if (excluded(z)) continue;
        const double v = J(z);
        if (v > best) { best = v; best_z = z; }
    }
    const double zl = best_z - step, zr = best_z + step;
    if (!excluded(zl) && !excluded(zr) && zl >= lo && zr <= hi &&
        J(zl) < best && J(zr) < best) {
        const double zstar = golden_max(J, zl, zr, 1e-12);
        const double v = J(zstar);
        if (v > best) { best = v; best_z = zstar; }
    }
    return {best, best_z};
}

} // namespace

std::pair<double, double> find_mu2(const TransferKernel& kernel,
                                   const KernelConstants& partial) {
    double lo = partial.mu1, hi = 20.0;
    auto value = [&](double mu) { return off_support_max(kernel, partial, mu).first; };
    if (!(value(lo) < 0.0) || !(value(hi) > 0.0))
        throw NumericalError(
            "find_mu2: no zero crossing of the off-support fitness maximum below mu = 20; "
            "kernel outside the supported family");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) < 0.0) lo = mid; else hi = mid;
    }
    const double mu2 = 0.5 * (lo + hi);
    const double z3 = off_support_max(kernel, partial, mu2).second;
    return {mu2, z3};
}

bool check_hypothesis_37(const TransferKernel& kernel, const KernelConstants& c,
                         double mu) {
    if (!(mu >= c.mu2)) throw DomainError("check_hypothesis_37: requires mu >= mu2");
    const double h = 1e-6;
    const double d = (dimorphic_fitness_shape(kernel, c, mu + h, c.z3) -
                      dimorphic_fitness_shape(kernel, c, mu - h, c.z3)) / (2.0 * h);
    return d > 0.0;
}

KernelConstants compute_constants(const TransferKernel& kernel) {
    KernelConstants c;
    const auto G = [&](double z) { return gap_function(kernel, z); };
    const auto dG = [&](double z) { return gap_function_deriv(kernel, z); };
    if (!(G(kernel.z_H) > 0.0) || !(G(40.0) < 0.0))
        throw ConfigError("compute_constants: gap function has no sign change on "
                          "(z_H, 40]; kernel violates the structural hypotheses");
    const double rough = bisect(G, kernel.z_H, 40.0, 1e-10);
    c.d1 = newton_polish(G, dG, kernel.z_H, 40.0, rough, 1e-15);
    c.C1 = 1.0 - kernel.dH(c.d1);
    // H'' is maximal at -z_H: the third derivative is positive left of -z_H
    // and nonpositive on [-z_H, 0).
    c.C2 = 1.0 / kernel.d2H(-kernel.z_H);
    c.mu1 = c.d1 / c.C1;
    std::tie(c.mu2, c.z3) = find_mu2(kernel, c);
    return c;
}

DiscreteESS monomorphic_formulas(const ModelParams& params) {
    DiscreteESS e;
    const double rho0 = 1.0 - 0.5 * params.tau * params.mu;
    e.points = {params.mu};
    e.weights = {rho0};
    e.rho0 = rho0;
    return e;
}

EssCandidate monomorphic_ess(const ModelParams& params, const KernelConstants& c) {
    EssCandidate out;
    if (params.mu > c.mu1) {
        out.invalid_reason = "mu > mu1";
        return out;
    }
    if (params.tau > 0.0 && !(params.tau < 2.0 / params.mu)) {
        out.invalid_reason = "tau >= 2/mu";
        return out;
    }
    out.ess = monomorphic_formulas(params);
    return out;
}

DiscreteESS dimorphic_formulas(const ModelParams& params, const KernelConstants& c,
                               const TransferKernel& kernel) {
    const DimorphicShape s = dimorphic_shape(c, params.mu);
    const double rho0 = 1.0 - params.g * s.z1 * s.z1 +
                        params.g * (params.mu - c.mu1) * kernel.H(c.d1);
    DiscreteESS e;
    e.points = {s.z1, s.z2};
    e.weights = {s.frac_a * rho0, s.frac_b * rho0};
    e.rho0 = rho0;
    return e;
}

double dimorphic_tau_limit(const ModelParams& params, const KernelConstants& c,
                           const TransferKernel& kernel) {
    const DimorphicShape s = dimorphic_shape(c, params.mu);
    return 2.0 * params.mu /
           (s.z1 * s.z1 - (params.mu - c.mu1) * kernel.H(c.d1));
}

EssCandidate dimorphic_ess(const ModelParams& params, const KernelConstants& c,
                           const TransferKernel& kernel) {
    EssCandidate out;
    if (!(params.mu > c.mu1)) {
        out.invalid_reason = "mu <= mu1";
        return out;
    }
    if (!(params.mu <= c.mu2)) {
        out.invalid_reason = "mu > mu2";
        return out;
    }
    if (!(params.tau < dimorphic_tau_limit(params, c, kernel))) {
        out.invalid_reason = "tau >= tau2";
        return out;
    }
    out.ess = dimorphic_formulas(params, c, kernel);
    return out;
}

namespace {

// Stationarity system for three traits, unknowns x = (z1, z2, z3, w1, w2, rho),
// w3 = 1 - w1 - w2:
//   -z_i^2 + 2 mu Psi(z_i) - (rho - 1)/g = 0
//   -z_i   +   mu Psi'(z_i)              = 0
// with Psi(z) = sum_j w_j H(z - z_j).
void trimorphic_residual(const TransferKernel& k, double mu, double g,
                         const std::array<double, 6>& x, std::array<double, 6>& r) {
    const double z[3] = {x[0], x[1], x[2]};
    const double w[3] = {x[3], x[4], 1.0 - x[3] - x[4]};
    const double rho = x[5];
    for (int i = 0; i < 3; ++i) {
        double psi = 0.0, dpsi = 0.0;
        for (int j = 0; j < 3; ++j) {
            psi += w[j] * k.H(z[i] - z[j]);
            dpsi += w[j] * k.dH(z[i] - z[j]);
        }
        r[i] = -z[i] * z[i] + 2.0 * mu * psi - (rho - 1.0) / g;
        r[3 + i] = -z[i] + mu * dpsi;
    }
}

void trimorphic_jacobian(const TransferKernel& k, double mu, double g,
                         const std::array<double, 6>& x, std::vector<double>& jac) {
    const double z[3] = {x[0], x[1], x[2]};
    const double w[3] = {x[3], x[4], 1.0 - x[3] - x[4]};
    jac.assign(36, 0.0);
    for (int i = 0; i < 3; ++i) {
        double dpsi = 0.0, d2psi = 0.0;
        for (int j = 0; j < 3; ++j) {
            dpsi += w[j] * k.dH(z[i] - z[j]);
            d2psi += w[j] * k.d2H(z[i] - z[j]);
        }
        for (int col = 0; col < 3; ++col) {
            const double delta = (i == col) ? 1.0 : 0.0;
            jac[i * 6 + col] = delta * (-2.0 * z[i] + 2.0 * mu * dpsi) -
                               2.0 * mu * w[col] * k.dH(z[i] - z[col]);
            jac[(3 + i) * 6 + col] = delta * (-1.0 + mu * d2psi) -
                                     mu * w[col] * k.d2H(z[i] - z[col]);
        }
        for (int m = 0; m < 2; ++m) {
            jac[i * 6 + 3 + m] = 2.0 * mu * (k.H(z[i] - z[m]) - k.H(z[i] - z[2]));
            jac[(3 + i) * 6 + 3 + m] = mu * (k.dH(z[i] - z[m]) - k.dH(z[i] - z[2]));
        }
        jac[i * 6 + 5] = -1.0 / g;
    }
}

// Newton with analytic Jacobian; converged when the residual max-norm
// drops to 1e-10.
bool trimorphic_newton(const TransferKernel& k, double mu, double g,
                       std::array<double, 6>& x, int& iters) {
    std::array<double, 6> r{};
    std::vector<double> jac, rhs(6);
    for (iters = 0; iters < 100; ++iters) {
        trimorphic_residual(k, mu, g, x, r);
        double maxres = 0.0;
        for (double v : r) maxres = std::max(maxres, std::fabs(v));
        if (!std::isfinite(maxres) || maxres > 1e8) return false;
        if (maxres <= 1e-10) return true;
        trimorphic_jacobian(k, mu, g, x, jac);
        for (int i = 0; i < 6; ++i) rhs[i] = -r[i];
        if (!solve_linear(jac, rhs)) return false;
        for (int i = 0; i < 6; ++i) x[i] += rhs[i];
    }
    return false;
}

std::array<double, 6> degenerate_seed(const KernelConstants& c,
                                      const TransferKernel& kernel, double mu,
                                      double tau) {
    const DimorphicShape s = dimorphic_shape(c, mu);
    const ModelParams p = make_params(tau, tau / (2.0 * mu), 1.0);
    const DiscreteESS dim = dimorphic_formulas(p, c, kernel);
    const double w3 = 1e-3;
    return {s.z1, s.z2, c.z3, s.frac_a * (1.0 - w3), s.frac_b * (1.0 - w3), dim.rho0};
}

} // namespace

TrimorphicResult trimorphic_ess(const ModelParams& params, const KernelConstants& c,
                                const TransferKernel& kernel,
                                const std::optional<DiscreteESS>& seed) {
    TrimorphicResult out;
    const double mu_target = params.mu;
    // A small band below mu2 is accepted: there the branch degenerates to a
    // vanishing third weight.
    if (!(mu_target >= c.mu2 - 1e-4)) {
        out.error = "mu < mu2: no three-trait regime";
        return out;
    }

    std::array<double, 6> x{};
    int iters = 0;
    if (seed) {
        const DiscreteESS& s = *seed;
        if (s.points.size() != 3 || s.rho0 <= 0.0) {
            out.error = "seed must carry three points and positive mass";
            return out;
        }
        x = {s.points[0], s.points[1], s.points[2],
             s.weights[0] / s.rho0, s.weights[1] / s.rho0, s.rho0};
        if (!trimorphic_newton(kernel, mu_target, params.g, x, iters)) {
            out.last_iterate = x;
            out.iterations = iters;
            out.error = "Newton did not converge from the supplied seed";
            return out;
        }
    } else {
        // Continuation in mu from the degenerate start just past mu2, each
        // converged solution seeding the next; step 0.05.
        double mu = std::min(c.mu2 + 1e-3, std::max(mu_target, c.mu2));
        x = degenerate_seed(c, kernel, mu, params.tau);
        const auto g_along = [&](double m) {
            return (std::fabs(m - mu_target) < 1e-15) ? params.g
                                                      : params.tau / (2.0 * m);
        };
        if (mu_target <= mu) mu = mu_target;
        if (!trimorphic_newton(kernel, mu, g_along(mu), x, iters)) {
            out.last_iterate = x;
            out.iterations = iters;
            out.error = "Newton did not converge at the continuation start";
            return out;
        }
        while (mu < mu_target) {
            mu = std::min(mu + 0.05, mu_target);
            if (!trimorphic_newton(kernel, mu, g_along(mu), x, iters)) {
                out.last_iterate = x;
                out.iterations = iters;
                out.error = "Newton diverged during continuation at mu = " +
                            format_double(mu);
                return out;
            }
        }
    }

    out.last_iterate = x;
    out.iterations = iters;

    double w[3] = {x[3], x[4], 1.0 - x[3] - x[4]};
    const double rho = x[5];
    for (double& wi : w) {
        if (wi < 0.0 && wi > -1e-5) wi = 0.0;   // degenerate boundary of the branch
    }
    if (w[0] < 0.0 || w[1] < 0.0 || w[2] < 0.0) {
        out.error = "negative weight in the converged iterate";
        return out;
    }
    if (!(rho > 0.0)) {
        out.error = "nonpositive total mass in the converged iterate";
        return out;
    }

    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return x[a] > x[b]; });
    DiscreteESS e;
    e.rho0 = rho;
    for (int idx : order) {
        e.points.push_back(x[idx]);
        e.weights.push_back(w[idx] * rho);
    }
    for (int i = 0; i + 1 < 3; ++i) {
        if (!(e.points[i] > e.points[i + 1] + 1e-8)) {
            out.error = "support points collided";
            return out;
        }
    }
    out.ess = e;
    return out;
}

double transfer_potential_at(const DiscreteESS& ess, const ModelParams& params,
                             const TransferKernel& kernel, double z) {
    double phi = 0.0;
    for (std::size_t i = 0; i < ess.points.size(); ++i)
        phi += ess.weights[i] / ess.rho0 * kernel.H(z - ess.points[i]);
    return params.tau * phi;
}

double fitness_at(const DiscreteESS& ess, const ModelParams& params,
                  const TransferKernel& kernel, double z) {
    return growth(params.g, z) - ess.rho0 +
           transfer_potential_at(ess, params, kernel, z);
}

FitnessProfile fitness(const DiscreteESS& ess, const ModelParams& params,
                       const TransferKernel& kernel, const std::vector<double>& grid) {
    if (ess.rho0 <= 0.0) throw DomainError("fitness: equilibrium has no mass");
    if (grid.empty()) throw DomainError("fitness: empty grid");
    FitnessProfile p;
    p.grid = grid;
    p.F.reserve(grid.size());
    p.phi.reserve(grid.size());
    for (double z : grid) {
        const double phi = transfer_potential_at(ess, params, kernel, z);
        p.phi.push_back(phi);
        p.F.push_back(growth(params.g, z) - ess.rho0 + phi);
    }
    return p;
}

VerifyReport verify_ess(const DiscreteESS& ess, const ModelParams& params,
                        const TransferKernel& kernel, VerifyOptions opts) {
    if (ess.points.empty() || !(ess.rho0 > 0.0))
        throw DomainError("verify_ess: malformed equilibrium");
    if (std::isnan(opts.z_hi)) opts.z_hi = params.mu + 5.0;

    VerifyReport rep;
    rep.max_fitness = -std::numeric_limits<double>::infinity();
    rep.max_fitness_excursion = -std::numeric_limits<double>::infinity();

    const int n = static_cast<int>(std::llround((opts.z_hi - opts.z_lo) / opts.step));
    for (int i = 0; i <= n; ++i) {
        const double z = opts.z_lo + i * opts.step;
        const double f = fitness_at(ess, params, kernel, z);
        rep.max_fitness = std::max(rep.max_fitness, f);
        double dist = std::numeric_limits<double>::infinity();
        for (double zi : ess.points) dist = std::min(dist, std::fabs(z - zi));
        if (dist > 0.05 && f > rep.max_fitness_excursion) {
            rep.max_fitness_excursion = f;
            rep.excursion_z = z;
        }
    }

    const double fd_step = 1e-6;
    bool support_ok = true;
    for (double zi : ess.points) {
        const double f = fitness_at(ess, params, kernel, zi);
        const double df = (fitness_at(ess, params, kernel, zi + fd_step) -
                           fitness_at(ess, params, kernel, zi - fd_step)) /
                          (2.0 * fd_step);
        rep.support_F.push_back(f);
        rep.support_dF.push_back(df);
        if (std::fabs(f) > opts.tol || std::fabs(df) > 10.0 * opts.tol)
            support_ok = false;
    }

    const double z_cap = std::min(params.mu, 2.0 * std::sqrt(params.mu));
    rep.support_bounds_ok = true;
    for (double zi : ess.points)
        if (zi < -1e-12 || zi > z_cap + 1e-12) rep.support_bounds_ok = false;

    rep.valid = rep.max_fitness <= opts.tol && support_ok && rep.support_bounds_ok;
    if (!rep.valid) {
        if (rep.max_fitness > opts.tol)
            rep.violated = "fitness positive at z = " + format_double(rep.excursion_z);
        else if (!support_ok)
            rep.violated = "fitness or its slope nonzero on the support";
        else
            rep.violated = "support outside [0, min(mu, 2 sqrt(mu))]";
    }
    return rep;
}

} // namespace hgteq
