#pragma once

#include <utility>

#include "spcorr/eigensystem.hpp"
#include "spcorr/subordinate.hpp"

namespace spcorr {

enum class Pairing { PP, PV };
enum class Regime { markov, bochner, inverse };

/// Identifies one spectral projections correlation value
/// rho_nu(P_m(X_t), P_n(X_s)) (PP) or rho_nu(P_m(X_t), V_n(X_s)) (PV).
struct CorrelationQuery {
    int m = 0;
    int n = 0;
    double t = 0.0;
    double s = 0.0;
    Pairing pairing = Pairing::PP;
    Regime regime = Regime::markov;
};

/// Markov clock:
///   PP: e^{-lam_m (t-s)^+ - lam_n (s-t)^+} c_nu(n, m)
///   PV: e^{-lam_m |t-s|} kappa_nu^{-1}(m) delta_mn.
double markov_corr(const EigenSystem& sys, const CorrelationQuery& q);

/// Bochner subordination replaces lam by phi(lam) in the exponent; the
/// eigenfunctions and the stationary measure are unchanged.
double bochner_corr(const EigenSystem& sys, const SubordinatorSpec& spec,
                    const CorrelationQuery& q);

/// The inverse-subordinator bracket
///   B(t, s; lam) = lam int_0^s eta_{t-r}(lam) U(dr) + eta_t(lam),
/// in (0, 1] with B(t, t; lam) = 1. Exposed separately because the bounds,
/// the asymptotics and the closed-form checks all revolve around it.
double inverse_time_change_bracket(const SubordinatorSpec& spec, double lam, double t,
                                   double s, double tol = 1e-8);

/// Inverse time change: factor (c_nu(n,m) or kappa^{-1} delta) times the
/// bracket. Requires t, s > 0; t < s is evaluated through the symmetry
/// I(t,s) = I(s,t) by swapping (t,s) and (m,n).
double inverse_tc_corr(const EigenSystem& sys, const SubordinatorSpec& spec,
                       const CorrelationQuery& q);

/// Sandwich bounds
///   eta_t(lam_m)(lam_m E[L_s] + 1) <= bracket <= eta_{t-s}(lam_m)(lam_m E[L_s] + 1),
/// each multiplied by the pairing factor. Both endpoints are surfaced.
std::pair<double, double> inverse_tc_bounds(const EigenSystem& sys,
                                            const SubordinatorSpec& spec,
                                            const CorrelationQuery& q);

/// Large-t approximant factor * eta_t(lam_m)(lam_m E[L_s] + 1); valid only
/// for long-tailed eta (throws std::domain_error otherwise — e.g. Poisson).
/// The stable kind uses the refined form
///   factor / (Gamma(1-alpha) t^alpha) * (1/lam_m + s^alpha / Gamma(1+alpha)).
double inverse_tc_asymptotic(const EigenSystem& sys, const SubordinatorSpec& spec,
                             const CorrelationQuery& q);

/// Zero-lag value, the same in all three regimes:
/// c_nu(n,m) for PP, kappa^{-1}(m) delta_mn for PV.
double same_time_corr(const EigenSystem& sys, const CorrelationQuery& q);

}  // namespace spcorr
