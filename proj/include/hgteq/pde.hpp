#ifndef HGTEQ_PDE_HPP
#define HGTEQ_PDE_HPP

#include <vector>

#include "hgteq/kernels.hpp"

namespace hgteq {

// Uniform trait grid z_j = z_min + j dz, j = 0 .. n_z-1.
struct Grid1D {
    double z_min = -2.0;
    double z_max = 6.0;
    double dz = 1e-2;
    int n_z = 0;

    // Validates that (z_max - z_min)/dz is an integer (to 1e-9) and that
    // n_z >= 8 (the boundary extrapolation needs four points per side).
    static Grid1D make(double z_min, double z_max, double dz);
    double node(int j) const { return z_min + j * dz; }
};

struct SimConfig {
    ModelParams params;
    TransferKernel kernel;
    Grid1D grid;
    double dt = 1e-4;
    double t_max = 200.0;
    double z_init = 0.0;
    double curvature = 1.0;       // A in u_0(z) = -A (z - z_init)^2
    double steady_tol = 1e-7;     // on max_j |u^{i+1}_j - u^i_j| / dt
};

// Simulation state in the exponential variable u = epsilon * ln(n).
struct PdeState {
    std::vector<double> u;
    double rho = 0.0;
    long t_index = 0;
    std::vector<double> rho_history;   // rho at t = 0, dt, 2 dt, ...
};

struct SimReport {
    std::vector<double> rho_history;
    std::vector<double> u_final;
    std::vector<double> n_rescaled;    // n / max(n)
    std::vector<double> support;       // ascending trait values of the peaks
    bool steady = false;
    long steps_taken = 0;
    double rho_final = 0.0;
    double max_u = 0.0;
    double mean_growth = 0.0;          // integral of R n / rho at the final state
};

// u_j = -A (z_j - z_init)^2 with the mass computed from shifted exponentials.
PdeState init_state(const SimConfig& config);

// Three-point second difference at every node. Boundary values come from
// cubic extrapolation ghosts:
//   u_{-1} = 4u_0 - 6u_1 + 4u_2 - u_3   (mirrored on the right),
// which keeps the stencil exact for polynomials up to degree three.
std::vector<double> laplacian(const std::vector<double>& u, double dz);

// Monotone (Godunov-type) squared gradient:
//   (Du_j)^2 = max{ (Du_j^+)^2, (Du_j^-)^2 }
// where the backward difference counts only when negative and the forward
// difference only when positive. Boundaries use the same ghosts as above
// when at least four nodes are available, otherwise the one-sided
// difference that exists.
std::vector<double> grad_sq(const std::vector<double>& u, double dz);

// The implicit mass update: unique positive root of
//   y * exp(y dt / epsilon) = dz * sum_j exp(A_j / epsilon),
// with the right-hand side handled in log form. Newton iteration to 1e-12
// relative, switching between the direct form (iterate below 0.1) and the
// logarithmic form, with bisection fallback.
double solve_rho(const std::vector<double>& A, double dt, double epsilon, double dz);
double solve_mass_equation(double log_S, double c);   // root of ln y + c y = log_S

// Transfer term by direct double sum, evaluating the kernel pairwise:
//   T_j = tau * dz * sum_k H(z_j - z_k) n_k / rho.
// Reference path for tests; the simulator uses a precomputed difference table.
std::vector<double> transfer_term(const PdeState& state, const SimConfig& config);

// Explicit scheme for all terms except the mass, which is implicit. One
// instance owns the precomputed kernel difference table H(d * dz); the table
// is built with exact odd symmetry so the pairwise transfer flux cancels in
// the double sum at machine precision.
class Simulator {
public:
    explicit Simulator(SimConfig config);

    void step();
    SimReport run();

    const SimConfig& config() const { return cfg_; }
    const PdeState& state() const { return st_; }
    PdeState& state() { return st_; }
    double last_increment() const { return last_increment_; }

    // Fast transfer path using the difference table.
    std::vector<double> transfer() const;

private:
    SimConfig cfg_;
    PdeState st_;
    std::vector<double> h_table_;   // H(d * dz), d = -(n-1) .. n-1
    std::vector<double> r_;         // R(z_j)
    double last_increment_ = 0.0;

    void density_weights(std::vector<double>& w, double& wsum) const;
};

// Nodes within `band` of max u, reduced to local maxima; ascending order.
std::vector<double> extract_support(const std::vector<double>& u, const Grid1D& grid,
                                    double band);
double default_support_band(double epsilon);   // 10 epsilon |ln epsilon|

} // namespace hgteq

#endif
