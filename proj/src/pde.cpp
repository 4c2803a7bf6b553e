#include "hgteq/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgteq/errors.hpp"
#include "hgteq/numerics.hpp"

namespace hgteq {

Grid1D Grid1D::make(double z_min, double z_max, double dz) {
    if (!(dz > 0.0)) throw ConfigError("dz: must be > 0");
    if (!(z_max > z_min)) throw ConfigError("zmax: must be > zmin");
    const double ratio = (z_max - z_min) / dz;
    const double rounded = std::round(ratio);
    if (std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("dz: (zmax - zmin)/dz must be an integer");
    Grid1D grid;
    grid.z_min = z_min;
    grid.z_max = z_max;
    grid.dz = dz;
    grid.n_z = static_cast<int>(rounded) + 1;
    if (grid.n_z < 8)
        throw ConfigError("grid: needs at least 8 nodes for the boundary extrapolation");
    return grid;
}

namespace {

double ghost_left(const std::vector<double>& u) {
    return 4.0 * u[0] - 6.0 * u[1] + 4.0 * u[2] - u[3];
}

double ghost_right(const std::vector<double>& u) {
    const std::size_t n = u.size();
    return 4.0 * u[n - 1] - 6.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4];
}

} // namespace

std::vector<double> laplacian(const std::vector<double>& u, double dz) {
    const std::size_t n = u.size();
    if (n < 4) throw DomainError("laplacian: needs at least 4 nodes");
    const double inv = 1.0 / (dz * dz);
    std::vector<double> out(n);
    out[0] = (ghost_left(u) - 2.0 * u[0] + u[1]) * inv;
    for (std::size_t j = 1; j + 1 < n; ++j)
        out[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * inv;
    out[n - 1] = (u[n - 2] - 2.0 * u[n - 1] + ghost_right(u)) * inv;
    return out;
}

namespace {

double upwind_sq(double backward, double forward) {
    const double b = backward < 0.0 ? backward * backward : 0.0;
    const double f = forward > 0.0 ? forward * forward : 0.0;
    return std::max(b, f);
}

} // namespace

std::vector<double> grad_sq(const std::vector<double>& u, double dz) {
    const std::size_t n = u.size();
    if (n < 2) throw DomainError("grad_sq: needs at least 2 nodes");
    std::vector<double> out(n);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double backward = (u[j] - u[j - 1]) / dz;
        const double forward = (u[j + 1] - u[j]) / dz;
        out[j] = upwind_sq(backward, forward);
    }
    // Boundary one-sided differences use the extrapolation ghosts when
    // available; with fewer than four nodes only the inward side exists.
    {
        const double forward = (u[1] - u[0]) / dz;
        const double backward = n >= 4 ? (u[0] - ghost_left(u)) / dz
                                       : std::numeric_limits<double>::quiet_NaN();
        out[0] = n >= 4 ? upwind_sq(backward, forward) : upwind_sq(0.0, forward);
    }
    {
        const double backward = (u[n - 1] - u[n - 2]) / dz;
        const double forward = n >= 4 ? (ghost_right(u) - u[n - 1]) / dz
                                      : std::numeric_limits<double>::quiet_NaN();
        out[n - 1] = n >= 4 ? upwind_sq(backward, forward) : upwind_sq(backward, 0.0);
    }
    return out;
}

double solve_mass_equation(double log_S, double c) {
    if (!std::isfinite(log_S) || !(c >= 0.0))
        throw NumericalError("mass update: non-finite right-hand side");
    // f(y) = ln y + c y - log_S is strictly increasing on (0, inf).
    const auto f = [&](double y) { return std::log(y) + c * y - log_S; };
    double hi = 1.0;
    for (int i = 0; i < 2200 && f(hi) < 0.0; ++i) hi *= 2.0;
    double lo = hi;
    for (int i = 0; i < 2200 && f(lo) > 0.0; ++i) lo *= 0.5;
    if (!(f(lo) <= 0.0 && f(hi) >= 0.0))
        throw NumericalError("mass update: failed to bracket the root");

    const bool have_S = log_S < 700.0;   // the direct form needs exp(log_S)
    const double S = have_S ? std::exp(log_S) : 0.0;
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        double yn;
        if (y < 0.1 && have_S) {
            // Direct form h(y) = y e^{c y} - S, accurate near zero.
            yn = y - (y - S * std::exp(-c * y)) / (1.0 + c * y);
        } else {
            // Logarithmic form g(y) = -eps ln y - c eps y + eps log_S
            // (up to the eps factor), robust for moderate and large y.
            yn = y - (std::log(y) + c * y - log_S) / (1.0 / y + c);
        }
        if (!std::isfinite(yn) || yn <= lo || yn >= hi) yn = 0.5 * (lo + hi);
        if (f(yn) < 0.0) lo = yn; else hi = yn;
        if (std::fabs(yn - y) <= 1e-12 * std::max(1.0, std::fabs(yn))) return yn;
        y = yn;
    }
    throw NumericalError("mass update: Newton failed to converge");
}

double solve_rho(const std::vector<double>& A, double dt, double epsilon, double dz) {
    if (!(dt > 0.0) || !(epsilon > 0.0) || !(dz > 0.0))
        throw DomainError("solve_rho: dt, epsilon, dz must be > 0");
    std::vector<double> scaled(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (!std::isfinite(A[i])) throw NumericalError("solve_rho: non-finite input");
        scaled[i] = A[i] / epsilon;
    }
    const double log_S = log_sum_exp(scaled) + std::log(dz);
    return solve_mass_equation(log_S, dt / epsilon);
}

PdeState init_state(const SimConfig& config) {
    const Grid1D& grid = config.grid;
    if (config.z_init < grid.z_min || config.z_init > grid.z_max)
        throw ConfigError("zinit: must lie inside [zmin, zmax]");
    if (!(config.curvature > 0.0)) throw ConfigError("A: must be > 0");
    PdeState st;
    st.u.resize(grid.n_z);
    for (int j = 0; j < grid.n_z; ++j) {
        const double d = grid.node(j) - config.z_init;
        st.u[j] = -config.curvature * d * d;
    }
    const double eps = config.params.epsilon;
    const double m = *std::max_element(st.u.begin(), st.u.end());
    double sum = 0.0;
    for (double uj : st.u) {
        const double a = (uj - m) / eps;
        if (a >= -708.0) sum += std::exp(a);
    }
    st.rho = std::exp(m / eps) * grid.dz * sum;
    st.rho_history.push_back(st.rho);
    return st;
}

std::vector<double> transfer_term(const PdeState& state, const SimConfig& config) {
    const Grid1D& grid = config.grid;
    const int n = grid.n_z;
    const double eps = config.params.epsilon;
    const double m = *std::max_element(state.u.begin(), state.u.end());
    std::vector<double> w(n, 0.0);
    double wsum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = (state.u[k] - m) / eps;
        if (a >= -708.0) w[k] = std::exp(a);
        wsum += w[k];
    }
    std::vector<double> T(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (w[k] == 0.0) continue;
            acc += config.kernel.H(grid.node(j) - grid.node(k)) * w[k];
        }
        T[j] = config.params.tau * acc / wsum;
    }
    return T;
}

Simulator::Simulator(SimConfig config) : cfg_(std::move(config)) {
    const int n = cfg_.grid.n_z;
    // Difference table H(d dz) for d = -(n-1) .. n-1, mirrored with exact
    // sign flips so the transfer flux is antisymmetric at machine precision.
    h_table_.assign(2 * n - 1, 0.0);
    for (int d = 0; d < n; ++d) {
        const double v = cfg_.kernel.H(d * cfg_.grid.dz);
        h_table_[(n - 1) + d] = v;
        h_table_[(n - 1) - d] = -v;
    }
    r_.resize(n);
    for (int j = 0; j < n; ++j) r_[j] = growth(cfg_.params.g, cfg_.grid.node(j));
    st_ = init_state(cfg_);
}

void Simulator::density_weights(std::vector<double>& w, double& wsum) const {
    const int n = cfg_.grid.n_z;
    const double eps = cfg_.params.epsilon;
    double m = -std::numeric_limits<double>::infinity();
    for (double uj : st_.u) m = std::max(m, uj);
    if (!std::isfinite(m))
        throw NumericalError("simulation: non-finite state at t_index = " +
                             std::to_string(st_.t_index));
    w.assign(n, 0.0);
    wsum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = (st_.u[k] - m) / eps;
        if (a >= -708.0) {
            w[k] = std::exp(a);
            wsum += w[k];
        }
    }
}

std::vector<double> Simulator::transfer() const {
    const int n = cfg_.grid.n_z;
    std::vector<double> T(n, 0.0);
    const double tau = cfg_.params.tau;
    if (tau == 0.0) return T;
    std::vector<double> w;
    double wsum = 0.0;
    density_weights(w, wsum);
    // Only nodes with nonvanishing density contribute; with small epsilon the
    // density is concentrated and this sum is far shorter than the grid.
    std::vector<int> nz;
    nz.reserve(64);
    for (int k = 0; k < n; ++k)
        if (w[k] != 0.0) nz.push_back(k);
    // One contiguous table slice per contributing node keeps the inner loop
    // a plain vectorizable accumulation.
    for (int k : nz) {
        const double scale = tau * w[k] / wsum;
        const double* row = h_table_.data() + (n - 1) - k;
        for (int j = 0; j < n; ++j) T[j] += scale * row[j];
    }
    return T;
}

void Simulator::step() {
    const int n = cfg_.grid.n_z;
    const double dz = cfg_.grid.dz;
    const double dt = cfg_.dt;
    const double eps = cfg_.params.epsilon;

    const std::vector<double> T = transfer();
    const std::vector<double> lap = laplacian(st_.u, dz);
    const std::vector<double> dsq = grad_sq(st_.u, dz);

    double max_sq = 0.0;
    for (double v : dsq) max_sq = std::max(max_sq, v);
    const double max_slope = std::sqrt(max_sq);
    if (max_slope > 0.0 && dt > dz / (2.0 * max_slope))
        throw NumericalError(
            "time step too large for the gradient term: dt = " + format_double(dt) +
            " exceeds dz / (2 max|Du|) = " + format_double(dz / (2.0 * max_slope)));

    std::vector<double> A(n);
    for (int j = 0; j < n; ++j)
        A[j] = st_.u[j] + dt * (r_[j] + T[j] + eps * lap[j] + dsq[j]);

    std::vector<double> scaled(n);
    for (int j = 0; j < n; ++j) scaled[j] = A[j] / eps;
    const double log_S = log_sum_exp(scaled) + std::log(dz);
    const double rho_next = solve_mass_equation(log_S, dt / eps);
    if (!std::isfinite(rho_next) || !(rho_next > 0.0))
        throw NumericalError("simulation: mass update produced rho = " +
                             format_double(rho_next) + " at t_index = " +
                             std::to_string(st_.t_index));

    double incr = 0.0;
    for (int j = 0; j < n; ++j) {
        const double next = A[j] - dt * rho_next;
        incr = std::max(incr, std::fabs(next - st_.u[j]));
        st_.u[j] = next;
    }
    last_increment_ = incr / dt;
    st_.rho = rho_next;
    st_.t_index += 1;
    st_.rho_history.push_back(rho_next);
}

double default_support_band(double epsilon) {
    return 10.0 * epsilon * std::fabs(std::log(epsilon));
}

std::vector<double> extract_support(const std::vector<double>& u, const Grid1D& grid,
                                    double band) {
    const int n = static_cast<int>(u.size());
    const double m = *std::max_element(u.begin(), u.end());
    std::vector<double> support;
    int j = 0;
    while (j < n) {
        if (u[j] < m - band || (j > 0 && u[j] < u[j - 1])) { ++j; continue; }
        int k = j;
        while (k + 1 < n && u[k + 1] == u[j]) ++k;   // flat run counts once
        if (k == n - 1 || u[k] >= u[k + 1]) support.push_back(grid.node((j + k) / 2));
        j = k + 1;
    }
    return support;
}

SimReport Simulator::run() {
    const long max_steps = static_cast<long>(std::llround(cfg_.t_max / cfg_.dt));
    bool steady = false;
    long i = st_.t_index;
    for (; i < max_steps; ++i) {
        step();
        if (last_increment_ <= cfg_.steady_tol) {
            steady = true;
            break;
        }
    }

    SimReport rep;
    rep.rho_history = st_.rho_history;
    rep.u_final = st_.u;
    rep.steady = steady;
    rep.steps_taken = st_.t_index;
    rep.rho_final = st_.rho;

    const double eps = cfg_.params.epsilon;
    const double m = *std::max_element(st_.u.begin(), st_.u.end());
    rep.max_u = m;
    rep.n_rescaled.resize(st_.u.size());
    double wsum = 0.0, rsum = 0.0;
    for (std::size_t j = 0; j < st_.u.size(); ++j) {
        const double a = (st_.u[j] - m) / eps;
        const double w = a >= -708.0 ? std::exp(a) : 0.0;
        rep.n_rescaled[j] = w;
        wsum += w;
        rsum += r_[j] * w;
    }
    rep.mean_growth = rsum / wsum;
    rep.support = extract_support(st_.u, cfg_.grid, default_support_band(eps));
    return rep;
}

} // namespace hgteq
