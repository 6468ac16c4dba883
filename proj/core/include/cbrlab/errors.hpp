#pragma once

#include <stdexcept>
#include <string>

namespace cbr {

// Invalid user input (bad parameter value, malformed scenario). CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to meet its tolerance. Carries the best
// estimate so callers can report it. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate(best_estimate), error_bound(error_bound) {}
    double best_estimate;
    double error_bound;
};

// Parameters outside a formula's stated domain of validity.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cbr
