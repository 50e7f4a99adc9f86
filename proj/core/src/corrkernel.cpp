#include "spcorr/corrkernel.hpp"

#include <cmath>
#include <stdexcept>

namespace spcorr {

namespace {

void check_indices(const EigenSystem& sys, const CorrelationQuery& q) {
    if (q.m < 0 || q.m > sys.n_max || q.n < 0 || q.n > sys.n_max)
        throw std::out_of_range("correlation query: index (m=" + std::to_string(q.m) +
                                ", n=" + std::to_string(q.n) + ") outside the system range 0.." +
                                std::to_string(sys.n_max) +
                                " (raise n_max when constructing the family)");
    if (q.t < 0.0 || q.s < 0.0)
        throw std::invalid_argument("correlation query: times must be >= 0");
}

// P_0 and V_0 are constant (lambda_0 = 0), so their standard deviation under
// the stationary law vanishes and the correlation definition takes its
// zero-variance branch.
bool degenerate_index(const CorrelationQuery& q) { return q.m == 0 || q.n == 0; }

double pairing_factor(const EigenSystem& sys, int m, int n, Pairing pairing, double tol) {
    if (pairing == Pairing::PV) {
        if (m != n) return 0.0;
        return 1.0 / sys.cached_kappa(m, tol);
    }
    return sys.cached_cosine(n, m, tol);
}

}  // namespace

double markov_corr(const EigenSystem& sys, const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    const double tol = default_quadrature_tol(sys);
    const double lag_m = std::max(q.t - q.s, 0.0);
    const double lag_n = std::max(q.s - q.t, 0.0);
    if (q.pairing == Pairing::PV) {
        if (q.m != q.n) return 0.0;
        return std::exp(-sys.lambda(q.m) * std::abs(q.t - q.s)) / sys.cached_kappa(q.m, tol);
    }
    return std::exp(-sys.lambda(q.m) * lag_m - sys.lambda(q.n) * lag_n) *
           sys.cached_cosine(q.n, q.m, tol);
}

double bochner_corr(const EigenSystem& sys, const SubordinatorSpec& spec,
                    const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    const double tol = default_quadrature_tol(sys);
    const double lag_m = std::max(q.t - q.s, 0.0);
    const double lag_n = std::max(q.s - q.t, 0.0);
    if (q.pairing == Pairing::PV) {
        if (q.m != q.n) return 0.0;
        return std::exp(-laplace_exponent(spec, sys.lambda(q.m)) * std::abs(q.t - q.s)) /
               sys.cached_kappa(q.m, tol);
    }
    return std::exp(-laplace_exponent(spec, sys.lambda(q.m)) * lag_m -
                    laplace_exponent(spec, sys.lambda(q.n)) * lag_n) *
           sys.cached_cosine(q.n, q.m, tol);
}

double inverse_time_change_bracket(const SubordinatorSpec& spec, double lam, double t,
                                   double s, double tol) {
    if (!(t >= s && s > 0.0))
        throw std::invalid_argument("inverse_time_change_bracket: requires t >= s > 0");
    EtaTransform eta_of(spec);
    const double integral =
        renewal_integral(spec, s, [&](double r) { return eta_of(t - r, lam); }, tol);
    return lam * integral + eta_of(t, lam);
}

double inverse_tc_corr(const EigenSystem& sys, const SubordinatorSpec& spec,
                       const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    if (!(q.t > 0.0 && q.s > 0.0))
        throw std::invalid_argument("inverse_tc_corr: requires t, s > 0");
    const double tol = default_quadrature_tol(sys);
    // I(t, s) = I(s, t): evaluate with the later time first.
    const bool swapped = q.t < q.s;
    const int m = swapped ? q.n : q.m;
    const int n = swapped ? q.m : q.n;
    const double t = swapped ? q.s : q.t;
    const double s = swapped ? q.t : q.s;
    const double factor = pairing_factor(sys, m, n, q.pairing, tol);
    if (factor == 0.0) return 0.0;
    return factor * inverse_time_change_bracket(spec, sys.lambda(m), t, s);
}

std::pair<double, double> inverse_tc_bounds(const EigenSystem& sys,
                                            const SubordinatorSpec& spec,
                                            const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    if (!(q.t >= q.s && q.s > 0.0))
        throw std::invalid_argument("inverse_tc_bounds: requires t >= s > 0");
    const double tol = default_quadrature_tol(sys);
    const double factor = pairing_factor(sys, q.m, q.n, q.pairing, tol);
    EtaTransform eta_of(spec);
    const double lam = sys.lambda(q.m);
    const double scale = lam * mean_inverse(spec, q.s) + 1.0;
    const double lower = eta_of(q.t, lam) * scale;
    const double upper = eta_of(q.t - q.s, lam) * scale;
    if (factor >= 0.0) return {factor * lower, factor * upper};
    return {factor * upper, factor * lower};
}

double inverse_tc_asymptotic(const EigenSystem& sys, const SubordinatorSpec& spec,
                             const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    if (!(q.t >= q.s && q.s > 0.0))
        throw std::invalid_argument("inverse_tc_asymptotic: requires t >= s > 0");
    const auto diag = is_long_tailed(spec);
    if (!diag.long_tailed)
        throw std::domain_error(
            "inverse_tc_asymptotic: eta is not long-tailed for this subordinator "
            "(fitted index " +
            std::to_string(diag.index) + "), the large-t equivalence does not hold");
    const double tol = default_quadrature_tol(sys);
    const double factor = pairing_factor(sys, q.m, q.n, q.pairing, tol);
    const double lam = sys.lambda(q.m);
    if (spec.kind == SubordinatorSpec::Kind::stable) {
        const double a = spec.alpha;
        return factor / (std::tgamma(1.0 - a) * std::pow(q.t, a)) *
               (1.0 / lam + std::pow(q.s, a) / std::tgamma(1.0 + a));
    }
    return factor * eta(spec, q.t, lam) * (lam * mean_inverse(spec, q.s) + 1.0);
}

double same_time_corr(const EigenSystem& sys, const CorrelationQuery& q) {
    check_indices(sys, q);
    if (degenerate_index(q)) return {};
    if (q.t != q.s) throw std::invalid_argument("same_time_corr: requires t == s");
    const double tol = default_quadrature_tol(sys);
    return pairing_factor(sys, q.m, q.n, q.pairing, tol);
}

}  // namespace spcorr
