#pragma once

#include <stdexcept>
#include <string>

namespace spde {

// Bad user input: malformed config, out-of-range parameter, schema mismatch.
// The CLI maps this family to exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error("field=" + field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Numerical failure on valid input: solver non-convergence, failed matrix
// factorization.  The CLI maps this family to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace spde
