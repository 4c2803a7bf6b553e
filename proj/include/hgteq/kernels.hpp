#ifndef HGTEQ_KERNELS_HPP
#define HGTEQ_KERNELS_HPP

#include <functional>
#include <string>
#include <vector>

namespace hgteq {

using ScalarFn = std::function<double(double)>;

// Transfer flux between two traits at distance z: an odd sigmoid from -1 to 1
// together with its first three analytic derivatives. z_H is the positive
// point where the third derivative changes sign (found at construction).
struct TransferKernel {
    std::string name;
    ScalarFn H;
    ScalarFn dH;
    ScalarFn d2H;
    ScalarFn d3H;
    double z_H = 0.0;
};

// Supported kernels: "tanh" and "arctan". Unknown names raise ConfigError.
TransferKernel make_kernel(const std::string& name);
const std::vector<std::string>& supported_kernels();

// Pass/fail per structural clause of the transfer-kernel hypotheses.
struct H1Report {
    bool odd_bounded_increasing = false;   // odd, H' > 0, |H| < 1
    bool normalized_concave = false;       // H(0)=0, H'(0)=1, H'' < 0 for z > 0
    bool inflection_split = false;         // H''' <= 0 on (0,z_H], > 0 beyond
    bool derivative_consistency = false;   // centered differences match dH..d3H
    bool pass() const {
        return odd_bounded_increasing && normalized_concave &&
               inflection_split && derivative_consistency;
    }
};

// Checks every clause on the sample grid. The grid must cover [-10, 10]
// with spacing at most 1e-3 (see default_h1_grid).
H1Report validate_H1(const TransferKernel& kernel, const std::vector<double>& grid);
std::vector<double> default_h1_grid();

// Quadratic growth rate 1 - g z^2, normalized to peak value 1 at z = 0.
double growth(double g, double z);

// Dimensionless parameters of the rescaled model. mu = tau / (2 g) is the
// transfer-to-selection ratio that controls how many traits coexist.
struct ModelParams {
    double tau = 0.0;
    double g = 1.0;
    double epsilon = 1e-3;
    double mu = 0.0;
};

// Validates and derives mu. tau may be zero (no transfer); g may be zero
// only together with tau = 0 (constant growth), in which case mu = 0.
ModelParams make_params(double tau, double g, double epsilon = 1e-3);

// Physical (dimensional) inputs prior to rescaling.
struct PhysicalParams {
    double sigma;      // mutational variance
    double K;          // transfer steepness
    double r;          // maximal growth rate
    double kappa;      // competition intensity
    double tau_phys;   // transfer rate
    double g_phys;     // selection strength
};

// tau = tau_phys/r, g = g_phys/(r K^2), epsilon = sqrt(sigma K^2 / r);
// the derived mu equals K^2 tau_phys / (2 g_phys).
ModelParams adimensionalize(const PhysicalParams& p);

} // namespace hgteq

#endif
