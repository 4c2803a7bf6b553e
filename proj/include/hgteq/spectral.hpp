#ifndef HGTEQ_SPECTRAL_HPP
#define HGTEQ_SPECTRAL_HPP

#include <utility>
#include <vector>

namespace hgteq {

// Principal eigenpair of -epsilon^2 d^2/dz^2 - R(z) with zero boundary
// values, in the sign convention  -eps^2 N'' - R N = -lambda N, so that
// lambda plays the role of the equilibrium population size.
struct EigenResult {
    double lambda = 0.0;
    std::vector<double> eigenvector;   // interior nodes, strictly positive
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    int n_points = 0;
    double residual = 0.0;             // discrete L2 residual of the eigen equation
};

// Three-point discretization on n_points nodes (boundaries included) and
// shifted inverse power iteration with direct tridiagonal solves, stopping
// when the Rayleigh quotient settles to 1e-12. The domain must contain the
// zero set [-1/sqrt(g), 1/sqrt(g)] of R and n_points must be at least 50.
EigenResult principal_eigen(double epsilon, double g, double domain_lo,
                            double domain_hi, int n_points, int max_iter = 500);

// True iff lambda is nondecreasing (within 1e-10 slack) along a strictly
// nested list of domains.
bool domain_monotonicity_check(double epsilon, double g,
                               const std::vector<std::pair<double, double>>& domains);

} // namespace hgteq

#endif
