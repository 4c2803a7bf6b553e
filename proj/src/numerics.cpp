#include "hgteq/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "hgteq/errors.hpp"

namespace hgteq {

double log_sum_exp(std::span<const double> args) {
    if (args.empty()) throw DomainError("log_sum_exp: empty argument list");
    double m = -std::numeric_limits<double>::infinity();
    for (double a : args) {
        if (!std::isfinite(a)) throw NumericalError("log_sum_exp: non-finite argument");
        m = std::max(m, a);
    }
    double sum = 0.0;
    for (double a : args) {
        const double d = a - m;
        if (d >= -708.0) sum += std::exp(d);   // smaller terms underflow past DBL_MIN
    }
    return m + std::log(sum);
}

bool solve_linear(std::vector<double>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) return false;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(a[r * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (!(best > 0.0) || !std::isfinite(best)) return false;
        if (piv != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * b[c];
        b[i] = s / a[i * n + i];
        if (!std::isfinite(b[i])) return false;
    }
    return true;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace hgteq
