#include "hgteq/rootfind.hpp"

#include <cmath>

#include "hgteq/errors.hpp"

namespace hgteq {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NumericalError("bisect: no sign change on the given bracket");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) { hi = mid; fhi = fm; }
        else { lo = mid; flo = fm; }
    }
    return 0.5 * (lo + hi);
}

double newton_polish(const std::function<double(double)>& f,
                     const std::function<double(double)>& df,
                     double lo, double hi, double x0, double tol, int max_iter) {
    double flo = f(lo);
    double x = x0;
    for (int i = 0; i < max_iter; ++i) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (flo * fx < 0.0) hi = x; else lo = x;
        const double d = df(x);
        double xn = x - fx / d;
        if (!(d != 0.0) || !std::isfinite(xn) || xn <= lo || xn >= hi)
            xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) <= tol) return xn;
        x = xn;
    }
    return x;
}

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
    constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace hgteq
