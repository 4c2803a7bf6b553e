#include "hgteq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hgteq/errors.hpp"
#include "hgteq/kernels.hpp"

namespace hgteq {

namespace {

// Thomas elimination for a constant-off-diagonal tridiagonal system
// (diag[i] - shift) x_i + off (x_{i-1} + x_{i+1}) = b_i.
void tridiag_solve(const std::vector<double>& diag, double off, double shift,
                   std::vector<double>& b, std::vector<double>& scratch) {
    const std::size_t m = diag.size();
    scratch.resize(m);
    double d = diag[0] - shift;
    scratch[0] = off / d;
    b[0] /= d;
    for (std::size_t i = 1; i < m; ++i) {
        d = diag[i] - shift - off * scratch[i - 1];
        scratch[i] = off / d;
        b[i] = (b[i] - off * b[i - 1]) / d;
    }
    for (std::size_t i = m - 1; i-- > 0;) b[i] -= scratch[i] * b[i + 1];
}

// Number of eigenvalues of the tridiagonal matrix below x (Sturm count via
// the LDL^T pivots).
int sturm_count(const std::vector<double>& diag, double off, double x) {
    const double off2 = off * off;
    int count = 0;
    double d = diag[0] - x;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        if (d == 0.0) d = 1e-300;
        d = (diag[i] - x) - off2 / d;
        if (d < 0.0) ++count;
    }
    return count;
}

} // namespace

EigenResult principal_eigen(double epsilon, double g, double domain_lo,
                            double domain_hi, int n_points, int max_iter) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon: must be > 0");
    if (!(g > 0.0)) throw ConfigError("g: must be > 0");
    if (n_points < 50) throw ConfigError("n_points: must be at least 50");
    const double reach = 1.0 / std::sqrt(g);
    if (!(domain_lo < -reach && domain_hi > reach))
        throw ConfigError("domain: must contain the zero set [-1/sqrt(g), 1/sqrt(g)]");

    const int m = n_points - 2;            // interior unknowns
    const double h = (domain_hi - domain_lo) / (n_points - 1);
    const double e2h2 = epsilon * epsilon / (h * h);
    std::vector<double> diag(m);
    double max_R = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const double z = domain_lo + (i + 1) * h;
        const double R = growth(g, z);
        diag[i] = 2.0 * e2h2 - R;
        max_R = std::max(max_R, R);
    }
    const double off = -e2h2;

    const auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.resize(m);
        for (int i = 0; i < m; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += off * v[i - 1];
            if (i + 1 < m) s += off * v[i + 1];
            out[i] = s;
        }
    };

    // Locate the ground value by Sturm bisection (robust at any spectral
    // gap), then run shifted inverse power iteration just below it; the
    // Rayleigh quotient settles to 1e-12 within a few tridiagonal solves.
    double lo = -max_R - 1.0;               // Gershgorin: spectrum >= -max_R
    double hi = diag[0] + 2.0 * e2h2;
    for (double x : diag) hi = std::max(hi, x + 2.0 * e2h2);
    while (hi - lo > 1e-13 * std::max(1.0, std::fabs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) >= 1) hi = mid; else lo = mid;
    }
    const double ground = 0.5 * (lo + hi);
    const double shift = ground - std::max(1e-10, 1e-10 * std::fabs(ground));

    std::vector<double> v(m, 1.0), w, Mw, scratch;
    double norm = std::sqrt(static_cast<double>(m));
    for (double& x : v) x /= norm;

    double theta = 0.0, theta_prev = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (;; ++iter) {
        if (iter >= max_iter)
            throw NumericalError("principal_eigen: inverse iteration did not converge");
        w = v;
        tridiag_solve(diag, off, shift, w, scratch);
        norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : w) x /= norm;
        apply(w, Mw);
        theta = 0.0;
        for (int i = 0; i < m; ++i) theta += w[i] * Mw[i];
        double res = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = Mw[i] - theta * w[i];
            res += r * r;
        }
        v = w;
        if (std::fabs(theta - theta_prev) <= 1e-12 * std::max(1.0, std::fabs(theta)) &&
            std::sqrt(res) <= 1e-9)
            break;
        theta_prev = theta;
    }

    // Ground state has one sign; orient it positive and normalize in the
    // grid-weighted L2 norm.
    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum < 0.0)
        for (double& x : v) x = -x;
    double l2 = 0.0;
    for (double x : v) l2 += x * x;
    l2 = std::sqrt(h * l2);
    for (double& x : v) x /= l2;

    std::vector<double> Mv;
    apply(v, Mv);
    double res = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = Mv[i] - theta * v[i];
        res += r * r;
    }

    EigenResult out;
    out.lambda = -theta;
    out.eigenvector = std::move(v);
    out.domain_lo = domain_lo;
    out.domain_hi = domain_hi;
    out.n_points = n_points;
    out.residual = std::sqrt(h * res);
    return out;
}

bool domain_monotonicity_check(double epsilon, double g,
                               const std::vector<std::pair<double, double>>& domains) {
    if (domains.empty()) throw ConfigError("domains: list must not be empty");
    for (std::size_t i = 1; i < domains.size(); ++i) {
        const auto& [alo, ahi] = domains[i - 1];
        const auto& [blo, bhi] = domains[i];
        if (!(blo <= alo && ahi <= bhi && (blo < alo || ahi > bhi)))
            throw ConfigError("domains: must be strictly nested, smallest first");
    }
    if (domains.size() == 1) return true;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : domains) {
        const int n = std::max(51, static_cast<int>(std::llround((hi - lo) / 5e-3)) + 1);
        const double lam = principal_eigen(epsilon, g, lo, hi, n).lambda;
        if (lam < prev - 1e-10) return false;
        prev = lam;
    }
    return true;
}

} // namespace hgteq
