#ifndef HGTEQ_ESS_HPP
#define HGTEQ_ESS_HPP

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hgteq/kernels.hpp"

namespace hgteq {

// Constants determined by the kernel alone.
//   d1  : unique positive root of 2H(z) - z(1 + H'(z))
//   C1  : 1 - H'(d1), in (0, 1)
//   C2  : 1 / max H''  (the maximum sits at -z_H)
//   mu1 : d1 / C1, threshold between one and two coexisting traits
//   mu2 : smallest mu >= mu1 where the two-trait fitness gains a third zero
//   z3  : location of that third zero at mu = mu2
struct KernelConstants {
    double d1 = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double mu1 = 0.0;
    double mu2 = std::numeric_limits<double>::quiet_NaN();
    double z3 = std::numeric_limits<double>::quiet_NaN();
};

// Computes all constants, including the (mu2, z3) search.
KernelConstants compute_constants(const TransferKernel& kernel);

// The (mu2, z3) search alone; requires d1, C1, mu1 already filled in.
// Outer bisection on mu over [mu1, 20]; the inner step maximizes the
// two-trait fitness shape away from its support and detects the value
// crossing zero from below.
std::pair<double, double> find_mu2(const TransferKernel& kernel,
                                   const KernelConstants& partial);

// Fitness of the two-trait candidate at ratio mu, divided by g. Depends on
// the kernel and mu only.
double dimorphic_fitness_shape(const TransferKernel& kernel,
                               const KernelConstants& c, double mu, double z);

// True iff the mu-derivative of the shape above, taken at the stored z3 by a
// centered difference of step 1e-6, is positive. Requires mu >= mu2.
bool check_hypothesis_37(const TransferKernel& kernel, const KernelConstants& c,
                         double mu);

// Equilibrium concentrated on finitely many traits.
struct DiscreteESS {
    std::vector<double> points;    // strictly decreasing
    std::vector<double> weights;   // masses a_i >= 0
    double rho0 = 0.0;             // total mass, sum of weights
    int morphism() const { return static_cast<int>(points.size()); }
};

// Closed-form candidate plus the validity verdict. When the parameters fall
// outside the regime, `ess` is empty and `invalid_reason` names the violated
// condition.
struct EssCandidate {
    std::optional<DiscreteESS> ess;
    std::string invalid_reason;
    bool valid() const { return ess.has_value(); }
};

// Unchecked closed forms (useful to study the degeneration at the regime
// boundaries).
DiscreteESS monomorphic_formulas(const ModelParams& params);
DiscreteESS dimorphic_formulas(const ModelParams& params, const KernelConstants& c,
                               const TransferKernel& kernel);

// Valid iff mu <= mu1 and tau < 2/mu (tau = 0 meaning mu = 0 passes).
EssCandidate monomorphic_ess(const ModelParams& params, const KernelConstants& c);

// Valid iff mu1 < mu <= mu2 and tau < tau2(mu).
EssCandidate dimorphic_ess(const ModelParams& params, const KernelConstants& c,
                           const TransferKernel& kernel);

// Critical transfer rate of the two-trait regime.
double dimorphic_tau_limit(const ModelParams& params, const KernelConstants& c,
                           const TransferKernel& kernel);

// Newton solve of the three-trait stationarity system in the unknowns
// (z1, z2, z3, w1, w2, rho0) with w3 = 1 - w1 - w2. Without a seed, the
// solution is continued in mu from the degenerate start at mu2.
struct TrimorphicResult {
    std::optional<DiscreteESS> ess;
    std::array<double, 6> last_iterate{};
    int iterations = 0;
    std::string error;
    bool converged() const { return ess.has_value(); }
};
TrimorphicResult trimorphic_ess(const ModelParams& params, const KernelConstants& c,
                                const TransferKernel& kernel,
                                const std::optional<DiscreteESS>& seed = {});

// Fitness profile F(z) = 1 - g z^2 - rho0 + Phi0(z) of a discrete equilibrium,
// with the transfer potential Phi0(z) = tau * sum_i (a_i/rho0) H(z - z_i).
struct FitnessProfile {
    std::vector<double> grid;
    std::vector<double> F;
    std::vector<double> phi;
};
FitnessProfile fitness(const DiscreteESS& ess, const ModelParams& params,
                       const TransferKernel& kernel, const std::vector<double>& grid);
double fitness_at(const DiscreteESS& ess, const ModelParams& params,
                  const TransferKernel& kernel, double z);
double transfer_potential_at(const DiscreteESS& ess, const ModelParams& params,
                             const TransferKernel& kernel, double z);

struct VerifyOptions {
    double z_lo = -2.0;
    double z_hi = std::numeric_limits<double>::quiet_NaN();  // default mu + 5
    double step = 1e-3;
    double tol = 1e-7;
};

struct VerifyReport {
    bool valid = false;
    double max_fitness = 0.0;             // over the whole grid
    double max_fitness_excursion = 0.0;   // away from the support points
    double excursion_z = 0.0;
    std::vector<double> support_F;
    std::vector<double> support_dF;
    bool support_bounds_ok = false;
    std::string violated;
};

// Checks that F vanishes (value and slope) on the support, stays below tol
// everywhere on the grid, and that the support obeys 0 <= z <= min(mu, 2 sqrt(mu)).
VerifyReport verify_ess(const DiscreteESS& ess, const ModelParams& params,
                        const TransferKernel& kernel, VerifyOptions opts = {});

} // namespace hgteq

#endif
