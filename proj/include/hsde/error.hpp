#pragma once

#include <stdexcept>
#include <string>

namespace hsde {

/// Parameters or configuration that can never describe a valid model/run.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A well-formed request whose answer does not exist analytically
/// (e.g. a density where the Kolmogorov equation has no integrable solution).
class AnalyticRefusal : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature or root finding failed to reach the requested tolerance.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace hsde
