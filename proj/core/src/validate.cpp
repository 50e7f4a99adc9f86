#include "spcorr/validate.hpp"

#include <cmath>
#include <sstream>

#include "spcorr/corrkernel.hpp"
#include "spcorr/eigensystem.hpp"
#include "spcorr/quadrature.hpp"
#include "spcorr/specfun.hpp"
#include "spcorr/subordinate.hpp"

namespace spcorr {

namespace {

struct Suite {
    std::vector<CheckResult> results;
    double tol_override;

    void add(const std::string& name, double residual, double tol,
             const std::string& detail = "") {
        if (tol_override > 0.0) tol = tol_override;
        results.push_back({name, residual, tol, residual < tol, detail});
    }
};

double max_biorth_residual(const EigenSystem& sys, int n_max, double quad_tol) {
    const auto residuals = biorthogonality_check(sys, n_max, quad_tol);
    double worst = 0.0;
    for (const auto& row : residuals)
        for (double r : row) worst = std::max(worst, r);
    return worst;
}

void check_biorthogonality(Suite& suite, const ValidationOptions& opt) {
    const bool all = !opt.family.has_value();
    if (all || *opt.family == "classical") {
        EigenSystem sys = EigenSystem::Classical(opt.beta, 30);
        suite.add("biorthogonality/classical(beta=" + std::to_string(opt.beta) + ") n,m<=20",
                  max_biorth_residual(sys, 20, 1e-9), 1e-8);
    }
    if (all || *opt.family == "smallpert") {
        EigenSystem sys = EigenSystem::SmallPert(opt.b, 30);
        suite.add("biorthogonality/smallpert(b=" + std::to_string(opt.b) + ") n,m<=10",
                  max_biorth_residual(sys, 10, 1e-8), 1e-6);
    }
    if (all || *opt.family == "gausslag") {
        EigenSystem sys = EigenSystem::GaussLaguerre(opt.alpha, opt.b, 12);
        suite.add("biorthogonality/gausslag(alpha=" + std::to_string(opt.alpha) +
                      ",b=" + std::to_string(opt.b) + ") n,m<=6",
                  max_biorth_residual(sys, 6, 1e-7), 1e-5);
    }
}

void check_renewal_identity(Suite& suite) {
    std::vector<SubordinatorSpec> specs = {
        SubordinatorSpec::Stable(0.3), SubordinatorSpec::Stable(0.5),
        SubordinatorSpec::Stable(0.8), SubordinatorSpec::Poisson(1.0),
        SubordinatorSpec::Poisson(3.0), SubordinatorSpec::Generic(1.0)};
    for (const auto& spec : specs) {
        double worst = 0.0;
        EtaTransform eta_of(spec);
        for (double lam : {0.5, 1.0, 5.0}) {
            for (double t : {0.5, 1.0, 10.0}) {
                const double lhs =
                    lam * renewal_integral(spec, t, [&](double r) { return eta_of(t - r, lam); }) +
                    eta_of(t, lam);
                worst = std::max(worst, std::abs(lhs - 1.0));
            }
        }
        suite.add("renewal-identity/" + spec.to_string(), worst, 1e-6);
    }
}

void check_eta_laplace_consistency(Suite& suite) {
    // Numerically Laplace-transform t -> eta_t(lam) and compare with
    // phi(q) / (q (lam + phi(q))).
    for (const auto& spec : {SubordinatorSpec::Stable(0.5), SubordinatorSpec::Poisson(2.0)}) {
        EtaTransform eta_of(spec);
        const double lam = 1.0;
        double worst = 0.0;
        for (double q : {0.1, 1.0, 10.0}) {
            auto integrand = [&](double t) { return std::exp(-q * t) * eta_of(t, lam); };
            double acc = 0.0;
            double lo = 0.0, len = 1.0;
            for (int panel = 0; panel < 60; ++panel) {
                acc += integrate_gk(integrand, lo, lo + len, 1e-12);
                lo += len;
                if (std::exp(-q * lo) < 1e-14) break;
                len *= 1.5;
            }
            const double phi_q = laplace_exponent(spec, q);
            const double expected = phi_q / (q * (lam + phi_q));
            worst = std::max(worst, std::abs(acc - expected));
        }
        suite.add("eta-laplace-consistency/" + spec.to_string(), worst, 1e-5);
    }
}

void check_stable_asymptotics(Suite& suite) {
    // eta_t(lam) * Gamma(1-alpha) * lam * t^alpha -> 1
    for (double alpha : {0.5, 0.7}) {
        const double t = 1e4, lam = 1.0;
        const double e = mittag_leffler(alpha, -lam * std::pow(t, alpha));
        const double ratio = e * std::tgamma(1.0 - alpha) * lam * std::pow(t, alpha);
        suite.add("eta-asymptotic/stable(alpha=" + std::to_string(alpha) + ")",
                  std::abs(ratio - 1.0), 0.02);
    }
    // exact bracket / asymptotic approximant -> 1 at large t
    EigenSystem sys = EigenSystem::Classical(1.0, 10);
    const SubordinatorSpec spec = SubordinatorSpec::Stable(0.5);
    for (double t : {1e3, 1e4}) {
        CorrelationQuery q{1, 1, t, 1.0, Pairing::PP, Regime::inverse};
        const double exact = inverse_tc_corr(sys, spec, q);
        const double approx = inverse_tc_asymptotic(sys, spec, q);
        suite.add("bracket-asymptotic-ratio/stable(0.5) t=" + std::to_string(t),
                  std::abs(exact / approx - 1.0), t >= 1e4 ? 0.02 : 0.05);
    }
}

void check_regime_degeneration(Suite& suite) {
    // Pure drift: bochner must equal markov exactly.
    EigenSystem sys = EigenSystem::Classical(1.0, 10);
    const SubordinatorSpec drift = SubordinatorSpec::Generic(1.0);
    double worst = 0.0;
    for (int m = 0; m <= 4; ++m) {
        for (int n = 0; n <= 4; ++n) {
            for (double t : {0.5, 1.0}) {
                for (double s : {0.25, 0.5}) {
                    for (Pairing p : {Pairing::PP, Pairing::PV}) {
                        CorrelationQuery q{m, n, t, s, p, Regime::bochner};
                        worst = std::max(worst,
                                         std::abs(bochner_corr(sys, drift, q) - markov_corr(sys, q)));
                    }
                }
            }
        }
    }
    suite.add("regime-degeneration/pure-drift", worst, 1e-14);
}

void check_mittag_leffler(Suite& suite) {
    double worst_half = 0.0;
    for (double x = 0.1; x <= 5.0 + 1e-12; x += 0.1) {
        const double oracle = std::exp(x * x) * std::erfc(x);
        worst_half = std::max(worst_half, std::abs(mittag_leffler(0.5, -x) - oracle));
    }
    suite.add("mittag-leffler/alpha=1/2 vs erfc", worst_half, 1e-10);
    double worst_one = 0.0;
    for (double x = 0.1; x <= 5.0 + 1e-12; x += 0.1)
        worst_one = std::max(worst_one, std::abs(mittag_leffler(1.0, -x) - std::exp(-x)));
    suite.add("mittag-leffler/alpha=1 vs exp", worst_one, 1e-12);
}

void check_condition_numbers(Suite& suite, const ValidationOptions& opt) {
    EigenSystem sys = EigenSystem::Classical(opt.beta, 30);
    double worst = 0.0;
    for (int m = 1; m <= 20; ++m)
        worst = std::max(worst, std::abs(condition_number(sys, m) - 1.0));
    suite.add("condition-number/classical==1", worst, 1e-8);
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ValidationOptions& options) {
    Suite suite;
    suite.tol_override = options.tolerance_override;
    check_biorthogonality(suite, options);
    if (!options.family.has_value()) {
        check_renewal_identity(suite);
        check_eta_laplace_consistency(suite);
        check_stable_asymptotics(suite);
        check_regime_degeneration(suite);
        check_mittag_leffler(suite);
        check_condition_numbers(suite, options);
    }
    return suite.results;
}

}  // namespace spcorr
