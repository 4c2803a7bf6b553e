#include "hgteq/kernels.hpp"

#include <cmath>
#include <numbers>

#include "hgteq/errors.hpp"
#include "hgteq/rootfind.hpp"

namespace hgteq {

namespace {

double locate_z_H(const ScalarFn& d3H) {
    // The third derivative is negative near 0 and positive for large z,
    // with a single sign change.
    return bisect(d3H, 1e-6, 10.0, 1e-12);
}

TransferKernel tanh_kernel() {
    TransferKernel k;
    k.name = "tanh";
    k.H = [](double z) { return std::tanh(z); };
    k.dH = [](double z) { const double t = std::tanh(z); return 1.0 - t * t; };
    k.d2H = [](double z) {
        const double t = std::tanh(z);
        return -2.0 * t * (1.0 - t * t);
    };
    k.d3H = [](double z) {
        const double t = std::tanh(z);
        const double s = 1.0 - t * t;
        return s * (6.0 * t * t - 2.0);
    };
    k.z_H = locate_z_H(k.d3H);
    return k;
}

// Arctangent sigmoid rescaled to unit slope at the origin:
//   H(z) = (2/pi) atan(pi z / 2),  H'(0) = 1,  H(+inf) = 1.
TransferKernel arctan_kernel() {
    constexpr double c = std::numbers::pi / 2.0;
    TransferKernel k;
    k.name = "arctan";
    k.H = [](double z) { return (2.0 / std::numbers::pi) * std::atan(c * z); };
    k.dH = [](double z) { const double q = c * z; return 1.0 / (1.0 + q * q); };
    k.d2H = [](double z) {
        const double q = c * z;
        const double s = 1.0 + q * q;
        return -2.0 * c * c * z / (s * s);
    };
    k.d3H = [](double z) {
        const double q = c * z;
        const double s = 1.0 + q * q;
        return 2.0 * c * c * (3.0 * q * q - 1.0) / (s * s * s);
    };
    k.z_H = locate_z_H(k.d3H);
    return k;
}

} // namespace

const std::vector<std::string>& supported_kernels() {
    static const std::vector<std::string> names = {"tanh", "arctan"};
    return names;
}

TransferKernel make_kernel(const std::string& name) {
    if (name == "tanh") return tanh_kernel();
    if (name == "arctan") return arctan_kernel();
    std::string msg = "unknown kernel '" + name + "'; supported kernels:";
    for (const auto& n : supported_kernels()) msg += " " + n;
    throw ConfigError(msg);
}

std::vector<double> default_h1_grid() {
    std::vector<double> grid;
    const double lo = -10.0, hi = 10.0, step = 1e-3;
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    grid.reserve(n + 1);
    for (int i = 0; i <= n; ++i) grid.push_back(lo + i * step);
    return grid;
}

namespace {

// max |f'| and max |f''| over the grid by centered differences, used to
// bound the finite-difference consistency checks one derivative past d3H.
void derivative_bounds(const ScalarFn& f, const std::vector<double>& grid,
                       double& max_d1, double& max_d2) {
    const double h = 1e-3;
    max_d1 = 0.0;
    max_d2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); i += 10) {
        const double z = grid[i];
        const double fp = (f(z + h) - f(z - h)) / (2.0 * h);
        const double fpp = (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
        max_d1 = std::max(max_d1, std::fabs(fp));
        max_d2 = std::max(max_d2, std::fabs(fpp));
    }
}

bool centered_diff_matches(const ScalarFn& f, const ScalarFn& df,
                           const std::vector<double>& grid, double deriv_bound) {
    for (double h : {1e-2, 1e-3}) {
        const double tol = 5.0 * h * h * deriv_bound;
        for (std::size_t i = 0; i < grid.size(); i += 4) {
            const double z = grid[i];
            const double fd = (f(z + h) - f(z - h)) / (2.0 * h);
            if (std::fabs(df(z) - fd) > tol) return false;
        }
    }
    return true;
}

} // namespace

H1Report validate_H1(const TransferKernel& kernel, const std::vector<double>& grid) {
    if (grid.size() < 2) throw ConfigError("validate_H1: grid needs at least 2 points");
    double lo = grid.front(), hi = grid.back(), max_gap = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        max_gap = std::max(max_gap, grid[i] - grid[i - 1]);
    if (lo > -10.0 + 1e-9 || hi < 10.0 - 1e-9 || max_gap > 1e-3 + 1e-12)
        throw ConfigError("validate_H1: grid must cover [-10, 10] with spacing <= 1e-3");

    H1Report rep;

    bool odd = true, bounded = true, increasing = true;
    bool concave_right = true, split = true;
    for (double z : grid) {
        const double hz = kernel.H(z);
        if (std::fabs(hz + kernel.H(-z)) > 1e-13) odd = false;
        if (std::fabs(hz) >= 1.0) bounded = false;
        if (!(kernel.dH(z) > 0.0)) increasing = false;
        if (z > 0.0) {
            if (!(kernel.d2H(z) < 0.0)) concave_right = false;
            const double d3 = kernel.d3H(z);
            if (z <= kernel.z_H ? d3 > 1e-13 : d3 <= 0.0) split = false;
        }
    }
    rep.odd_bounded_increasing = odd && bounded && increasing;
    rep.normalized_concave = concave_right && std::fabs(kernel.H(0.0)) <= 1e-14 &&
                             std::fabs(kernel.dH(0.0) - 1.0) <= 1e-14;
    rep.inflection_split = split && kernel.z_H > 0.0;

    double max_d3 = 0.0;
    for (std::size_t i = 0; i < grid.size(); i += 10)
        max_d3 = std::max(max_d3, std::fabs(kernel.d3H(grid[i])));
    double max_d4 = 0.0, max_d5 = 0.0;
    derivative_bounds(kernel.d3H, grid, max_d4, max_d5);
    rep.derivative_consistency =
        centered_diff_matches(kernel.H, kernel.dH, grid, max_d3) &&
        centered_diff_matches(kernel.dH, kernel.d2H, grid, max_d4) &&
        centered_diff_matches(kernel.d2H, kernel.d3H, grid, max_d5);

    return rep;
}

double growth(double g, double z) {
    if (g < 0.0) throw DomainError("growth: g must be nonnegative");
    return 1.0 - g * z * z;
}

ModelParams make_params(double tau, double g, double epsilon) {
    if (!(tau >= 0.0)) throw DomainError("tau: must be >= 0");
    if (!(g >= 0.0)) throw DomainError("g: must be >= 0");
    if (tau > 0.0 && !(g > 0.0)) throw DomainError("g: must be > 0 when tau > 0");
    if (!(epsilon > 0.0)) throw DomainError("epsilon: must be > 0");
    ModelParams p;
    p.tau = tau;
    p.g = g;
    p.epsilon = epsilon;
    p.mu = (tau == 0.0) ? 0.0 : tau / (2.0 * g);
    return p;
}

ModelParams adimensionalize(const PhysicalParams& p) {
    if (!(p.sigma > 0.0 && p.K > 0.0 && p.r > 0.0 && p.kappa > 0.0 &&
          p.tau_phys > 0.0 && p.g_phys > 0.0))
        throw DomainError("adimensionalize: all physical parameters must be > 0");
    const double tau = p.tau_phys / p.r;
    const double g = p.g_phys / (p.r * p.K * p.K);
    const double epsilon = std::sqrt(p.sigma * p.K * p.K / p.r);
    return make_params(tau, g, epsilon);
}

} // namespace hgteq
