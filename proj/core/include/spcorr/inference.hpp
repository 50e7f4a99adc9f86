#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spcorr/eigensystem.hpp"

namespace spcorr {

struct EstimationResult {
    double estimate = 0.0;
    double se = 0.0;  ///< block jackknife (or delta-propagated) standard error
    std::size_t sample_size = 0;
    std::string method;
    bool degenerate = false;  ///< zero-variance branch: estimate forced to 0
};

struct ClassifierVerdict {
    std::string label;
    std::map<std::string, double> scores;   ///< RSS values, ratios
    std::map<std::string, double> fitted;   ///< fitted exponents / slopes / intercepts
    std::string diagnostics;
};

/// Sample Pearson correlation with a delete-one-block jackknife SE.
/// Zero sample variance on either side yields the degenerate result
/// (estimate 0, degenerate flag) rather than NaN.
EstimationResult empirical_corr(std::span<const double> xs, std::span<const double> ys,
                                std::size_t block = 100);

/// kappa_hat = 1 / rho_hat(P_m(X_j), V_m(X_j)) over a stationary sample,
/// with the SE delta-propagated. Throws DegenerateSampleError on constant
/// samples and UnstableInversionError when |rho_hat| < rho_floor.
EstimationResult kappa_hat(const EigenSystem& sys, std::span<const double> sample, int m,
                           double rho_floor = 1e-3);

struct SymmetryCandidate {
    std::string name;
    double kappa_theory = 0.0;
    double kappa_estimate = 0.0;
    double kappa_se = 0.0;
    double distance = 0.0;
    double eps_used = 0.0;
    bool accepted = false;
    std::string note;  ///< populated when the candidate errored
};

struct SymmetryVerdict {
    std::vector<SymmetryCandidate> candidates;
    std::vector<std::size_t> accepted;  ///< indices of accepted candidates
    int m = 0;
};

/// Accepts every candidate i with |kappa_i(m) - kappa_hat_i(m)| < eps.
/// eps <= 0 selects the default: 3x the delta-method SE of that candidate's
/// kappa_hat.
SymmetryVerdict symmetry_test(const std::vector<const EigenSystem*>& candidates,
                              std::span<const double> sample, int m, double eps = 0.0);

struct GLambdaPoint {
    std::size_t k = 0;
    double g = 0.0;
    double rho = 0.0;
    double se = 0.0;
    bool degenerate = false;
};

/// Rescaled biorthogonal correlation sequence
///   g(k) = kappa_hat(m) * rho_hat(P_m(X_k), V_m(X_j)),  k > j.
/// With several paths the estimate at each k is the ensemble correlation
/// across paths; a single trajectory falls back to stationary overlapping
/// pairs at lag k - j.
std::vector<GLambdaPoint> g_lambda(const EigenSystem& sys,
                                   const std::vector<std::vector<double>>& sample_by_time,
                                   int m, std::size_t j);

/// Least-squares competition between log g ~ k (exponential, short range)
/// and log g ~ log k (power, long range). RSS ratio inside [0.8, 1.25]
/// yields the "ambiguous" label. Nonpositive g values are dropped with a
/// warning count in the diagnostics; at least 8 usable lags are required.
ClassifierVerdict range_dependence_classifier(const std::vector<GLambdaPoint>& g);
ClassifierVerdict range_dependence_classifier(const std::vector<double>& g, int k_start = 1);

/// Jump-activity regimes from the growth of kappa(m):
///   (i) constant 1: pure diffusion
///   (ii) power law: diffusion + finite-activity jumps
///   (iii) exponential: diffusion + infinite-activity jumps
///   (iv) stretched exponential (beta grid {1.5, 2, 3}): pure jump.
/// Growth regimes are asymptotic, so the least-squares fits use the
/// documented window m >= 5 whenever at least six points remain there.
/// Near-ties (RSS ratio in [0.8, 1.25]) resolve to the earlier regime and
/// are surfaced in the diagnostics.
ClassifierVerdict jump_activity_classifier(const std::vector<EstimationResult>& kappas,
                                           int m_start = 1);

}  // namespace spcorr
