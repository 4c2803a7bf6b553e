#ifndef HGTEQ_ERRORS_HPP
#define HGTEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hgteq {

// Bad configuration: unknown names, missing fields, out-of-range values.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Arguments outside the mathematical domain of an operation.
struct DomainError : ConfigError {
    explicit DomainError(const std::string& msg) : ConfigError(msg) {}
};

// A solver diverged, exhausted its iteration budget or produced non-finite
// values. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hgteq

#endif
