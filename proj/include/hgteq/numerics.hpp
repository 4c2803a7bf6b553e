#ifndef HGTEQ_NUMERICS_HPP
#define HGTEQ_NUMERICS_HPP

#include <span>
#include <string>
#include <vector>

namespace hgteq {

// log(sum_i exp(args[i])), max-shifted so no exponential overflows.
// Arguments more than 708 below the maximum underflow past the smallest
// normal double and are skipped.
double log_sum_exp(std::span<const double> args);

// Solves the dense n-by-n system a x = b in place by Gaussian elimination
// with partial pivoting; a is row-major, b becomes the solution.
// Returns false when a pivot degenerates.
bool solve_linear(std::vector<double>& a, std::vector<double>& b);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

} // namespace hgteq

#endif
