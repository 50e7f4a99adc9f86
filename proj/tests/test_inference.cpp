#include <doctest.h>

#include <cmath>
#include <vector>

#include "spcorr/corrkernel.hpp"
#include "spcorr/errors.hpp"
#include "spcorr/inference.hpp"
#include "spcorr/rng.hpp"
#include "spcorr/simulate.hpp"
#include "spcorr/specfun.hpp"

using namespace spcorr;

TEST_CASE("empirical_corr: exact endpoints and independence") {
    std::vector<double> xs(3000), ys(3000);
    Rng rng(1);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = rng.normal();
    ys = xs;
    CHECK(empirical_corr(xs, ys).estimate == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = -xs[i];
    CHECK(empirical_corr(xs, ys).estimate == doctest::Approx(-1.0).epsilon(1e-12));

    std::vector<double> as(10000), bs(10000);
    for (std::size_t i = 0; i < as.size(); ++i) {
        as[i] = rng.normal();
        bs[i] = rng.normal();
    }
    const auto r = empirical_corr(as, bs);
    CHECK(std::abs(r.estimate) < 3.0 * r.se);

    CHECK_THROWS_AS(empirical_corr(std::vector<double>{1.0, 2.0},
                                   std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("empirical_corr: degenerate variance branch") {
    std::vector<double> xs(300, 2.5), ys(300);
    Rng rng(3);
    for (auto& y : ys) y = rng.normal();
    const auto r = empirical_corr(xs, ys);
    CHECK(r.degenerate);
    CHECK(r.estimate == 0.0);
}

TEST_CASE("kappa_hat: exact unity for the self-adjoint family") {
    const auto sys = EigenSystem::Classical(1.0, 10);
    const auto xs = sample_stationary(sys.measure, 20000, 11);
    const auto r = kappa_hat(sys, xs, 2);
    CHECK(r.estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kappa_hat: i.i.d. stationary draws recover the quadrature values") {
    const auto sys = EigenSystem::SmallPert(2.0, 10);
    const auto xs = sample_stationary(sys.measure, 100000, 9);
    for (int m = 1; m <= 5; ++m) {
        const auto r = kappa_hat(sys, xs, m);
        const double want = condition_number(sys, m);
        CHECK(std::abs(r.estimate - want) < 3.0 * r.se);
    }
}

TEST_CASE("kappa_hat: typed failures") {
    const auto sys = EigenSystem::Classical(1.0, 10);
    std::vector<double> constant(500, 1.0);
    CHECK_THROWS_AS(kappa_hat(sys, constant, 2), DegenerateSampleError);

    // P and V chosen orthogonal: rho_hat hovers near zero, far below a 0.5 floor.
    const auto weird = EigenSystem::Custom(
        "orthogonal-pair", DensityMeasure::GammaBeta(1.0),
        [](int n) { return static_cast<double>(n); },
        [](int n, double x) { return laguerre_normalized({n, 1.0}, x); },
        [](int n, double x) { return laguerre_normalized({n + 1, 1.0}, x); }, 5);
    const auto xs = sample_stationary(weird.measure, 20000, 13);
    CHECK_THROWS_AS(kappa_hat(weird, xs, 1, 0.5), UnstableInversionError);
}

TEST_CASE("symmetry_test: accepts the generating family") {
    const auto classical = EigenSystem::Classical(1.0, 10);
    const auto smallpert = EigenSystem::SmallPert(2.0, 10);
    const std::vector<const EigenSystem*> candidates = {&classical, &smallpert};

    {
        const auto xs = sample_stationary(classical.measure, 100000, 21);
        const auto v = symmetry_test(candidates, xs, 2);
        REQUIRE(v.accepted.size() >= 1);
        CHECK(v.accepted.front() == 0);
        CHECK(v.candidates[1].accepted == false);
    }
    {
        // i.i.d. nu_b draws are a valid zero-lag stationary sample
        const auto xs = sample_stationary(smallpert.measure, 100000, 22);
        const auto v = symmetry_test(candidates, xs, 2);
        bool smallpert_accepted = false;
        for (std::size_t idx : v.accepted) smallpert_accepted |= idx == 1;
        CHECK(smallpert_accepted);
    }
    {
        // eps = infinity accepts everything
        const auto xs = sample_stationary(classical.measure, 5000, 23);
        const auto v = symmetry_test(candidates, xs, 2, 1e100);
        CHECK(v.accepted.size() == 2);
    }
}

TEST_CASE("g_lambda: Markov ensemble decays like the eigenvalue exponential") {
    SimConfig cfg;
    cfg.paths = 40000;
    cfg.seed = 29;
    cfg.grid = {0, 1, 2, 3, 4, 5};
    cfg.beta = 1.0;
    const auto set = simulate_cir_stationary(cfg);
    std::vector<std::vector<double>> matrix(set.paths, std::vector<double>(set.grid.size()));
    for (std::size_t p = 0; p < set.paths; ++p)
        for (std::size_t i = 0; i < set.grid.size(); ++i) matrix[p][i] = set.at(p, i);

    const auto sys = EigenSystem::Classical(1.0, 10);
    const auto g = g_lambda(sys, matrix, 1, 0);
    REQUIRE(g.size() == 5);
    for (const auto& pt : g) {
        const double want = std::exp(-1.0 * static_cast<double>(pt.k));
        CHECK(std::abs(pt.g - want) < 4.0 * pt.se + 1e-3);
    }
    CHECK_THROWS_AS(g_lambda(sys, matrix, 1, 5), std::invalid_argument);
}

TEST_CASE("range classifier: noiseless models are labeled exactly") {
    for (double c : {0.3, 0.5, 1.0}) {
        std::vector<double> g;
        for (int k = 1; k <= 20; ++k) g.push_back(std::exp(-c * k));
        const auto v = range_dependence_classifier(g);
        CHECK(v.label == "short-range");
        CHECK(v.fitted.at("exponential_rate") == doctest::Approx(c).epsilon(1e-10));
    }
    for (double a : {0.3, 0.5, 1.0}) {
        std::vector<double> g;
        for (int k = 1; k <= 20; ++k) g.push_back(std::pow(k, -a));
        const auto v = range_dependence_classifier(g);
        CHECK(v.label == "long-range");
        CHECK(v.fitted.at("power_exponent") == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("range classifier: scale invariance and the Poisson-inverse sequence") {
    std::vector<double> g, g_scaled;
    for (int k = 1; k <= 15; ++k) {
        g.push_back(std::pow(k, -0.5));
        g_scaled.push_back(7.3 * std::pow(k, -0.5));
    }
    const auto a = range_dependence_classifier(g);
    const auto b = range_dependence_classifier(g_scaled);
    CHECK(a.label == b.label);
    CHECK(a.fitted.at("power_exponent") ==
          doctest::Approx(b.fitted.at("power_exponent")).epsilon(1e-10));

    // closed-form inverse-Poisson bracket sequence: exponential decay in k
    const auto spec = SubordinatorSpec::Poisson(2.0);
    std::vector<double> gp;
    for (int k = 2; k <= 14; ++k)
        gp.push_back(inverse_time_change_bracket(spec, 1.0, static_cast<double>(k), 1.0));
    CHECK(range_dependence_classifier(gp, 2).label == "short-range");
}

TEST_CASE("range classifier: preconditions and drops") {
    std::vector<double> too_short = {1.0, 0.5, 0.25};
    CHECK_THROWS_AS(range_dependence_classifier(too_short), std::invalid_argument);
    std::vector<double> with_bad;
    for (int k = 1; k <= 12; ++k) with_bad.push_back(std::exp(-0.4 * k));
    with_bad[4] = -0.1;
    const auto v = range_dependence_classifier(with_bad);
    CHECK(v.label == "short-range");
    CHECK(v.scores.at("dropped_nonpositive") == 1.0);
}

TEST_CASE("jump classifier: synthetic regimes are recovered exactly") {
    auto seq = [](auto f, int lo, int hi) {
        std::vector<EstimationResult> out;
        for (int m = lo; m <= hi; ++m) {
            EstimationResult r;
            r.estimate = f(m);
            r.se = 0.0;
            out.push_back(r);
        }
        return out;
    };
    {
        const auto v = jump_activity_classifier(seq([](int) { return 1.0; }, 1, 10));
        CHECK(v.label == "pure-diffusion");
    }
    {
        const auto v =
            jump_activity_classifier(seq([](int m) { return std::pow(m, 1.5); }, 1, 12));
        CHECK(v.label == "finite-activity-jumps");
        CHECK(v.fitted.at("power_exponent") == doctest::Approx(1.5).epsilon(1e-10));
    }
    {
        const auto v =
            jump_activity_classifier(seq([](int m) { return std::exp(0.66 * m); }, 1, 12));
        CHECK(v.label == "infinite-activity-jumps");
        CHECK(v.fitted.at("exponential_slope") == doctest::Approx(0.66).epsilon(1e-10));
    }
    {
        const auto v = jump_activity_classifier(
            seq([](int m) { return std::exp(0.1 * std::pow(m, 1.5)); }, 1, 12));
        CHECK(v.label == "pure-jump");
        CHECK(v.fitted.at("stretched_beta") == doctest::Approx(1.5).epsilon(1e-10));
        CHECK(v.fitted.at("stretched_slope") == doctest::Approx(0.1).epsilon(1e-10));
    }
    CHECK_THROWS_AS(jump_activity_classifier(seq([](int) { return 1.0; }, 1, 4)),
                    std::invalid_argument);
}

TEST_CASE("kappa_hat: SE shrinks like n^{-1/2}") {
    const auto sys = EigenSystem::SmallPert(2.0, 10);
    double se_small = 0.0, se_big = 0.0;
    {
        const auto xs = sample_stationary(sys.measure, 1000, 51);
        se_small = kappa_hat(sys, xs, 2).se;
    }
    {
        const auto xs = sample_stationary(sys.measure, 100000, 52);
        se_big = kappa_hat(sys, xs, 2).se;
    }
    const double ratio = se_small / se_big;  // expect ~ sqrt(100) = 10
    CHECK(ratio > 4.0);
    CHECK(ratio < 25.0);
}

TEST_CASE("end-to-end: inverse-stable ensemble classifies long-range") {
    SimConfig cfg;
    cfg.paths = 15000;
    cfg.seed = 61;
    cfg.grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    cfg.beta = 1.0;
    cfg.dt = 5e-3;
    const auto set = simulate_inverse_tc(cfg, SubordinatorSpec::Stable(0.5));
    std::vector<std::vector<double>> matrix(set.paths, std::vector<double>(set.grid.size()));
    for (std::size_t p = 0; p < set.paths; ++p)
        for (std::size_t i = 0; i < set.grid.size(); ++i) matrix[p][i] = set.at(p, i);
    const auto sys = EigenSystem::Classical(1.0, 10);
    const auto g = g_lambda(sys, matrix, 1, 0);
    const auto v = range_dependence_classifier(g);
    CHECK(v.label == "long-range");
}
