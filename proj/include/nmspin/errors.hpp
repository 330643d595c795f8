// errors.hpp - Exception types shared by the numeric core and the harness

#pragma once

#include <stdexcept>
#include <string>

namespace nmspin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

// The delta kernel is a distribution; it has no pointwise value.
struct DeltaKernelNotPointwise : Error {
    DeltaKernelNotPointwise()
        : Error("delta-correlated kernel has no pointwise value; use decoherence_markovian") {}
};

struct QuadratureDidNotConverge : Error {
    double error_estimate;
    double a, b;
    QuadratureDidNotConverge(double err, double lo, double hi)
        : Error("adaptive quadrature did not converge on [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "], error estimate " + std::to_string(err)),
          error_estimate(err), a(lo), b(hi) {}
};

struct NotCompletelyPositive : Error {
    double gamma;
    explicit NotCompletelyPositive(double g)
        : Error("Kraus pair undefined for Gamma = " + std::to_string(g) + " < 0"), gamma(g) {}
};

struct SingularState : Error {
    using Error::Error;
};

struct DegenerateDenominator : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct NoDataError : Error {
    using Error::Error;
};

} // namespace nmspin
