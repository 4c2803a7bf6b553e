#ifndef HGTEQ_ROOTFIND_HPP
#define HGTEQ_ROOTFIND_HPP

#include <functional>

namespace hgteq {

// Root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs.
// Stops when the bracket width falls below tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter = 200);

// Newton polish of x0 with derivative df, falling back to bisection steps
// whenever an iterate leaves [lo, hi]. The bracket must contain a sign change.
double newton_polish(const std::function<double(double)>& f,
                     const std::function<double(double)>& df,
                     double lo, double hi, double x0, double tol,
                     int max_iter = 100);

// Location of the maximum of a unimodal f on [a, b] by golden-section search.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol);

} // namespace hgteq

#endif
