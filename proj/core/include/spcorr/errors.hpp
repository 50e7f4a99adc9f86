#pragma once

#include <stdexcept>
#include <string>

namespace spcorr {

/// Quadrature refinement failed to reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical Laplace inversion did not converge.
struct InversionError : std::runtime_error {
    explicit InversionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A sample had zero variance where a correlation was requested.
struct DegenerateSampleError : std::runtime_error {
    explicit DegenerateSampleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// |rho_hat| fell below the inversion floor, so 1/rho_hat is meaningless.
struct UnstableInversionError : std::runtime_error {
    explicit UnstableInversionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spcorr
