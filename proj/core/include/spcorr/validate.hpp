#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spcorr {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    std::optional<std::string> family;  ///< classical | smallpert | gausslag
    double beta = 1.0;
    double b = 2.0;
    double alpha = 0.6;
    double tolerance_override = 0.0;  ///< > 0 replaces every per-check tolerance
};

/// The identity suite: biorthogonality residuals, the renewal identity
/// lam int_0^t eta_{t-r}(lam) U(dr) + eta_t(lam) = 1, Laplace-transform
/// consistency of eta, large-t asymptotic ratios, regime degeneration under
/// a pure-drift time change, and the Mittag-Leffler closed forms.
std::vector<CheckResult> run_validation_suite(const ValidationOptions& options);

}  // namespace spcorr
