// Acceptance suite: one check per shipped guarantee, one PASS/FAIL line
// each, nonzero exit when anything fails. Tolerances are pinned in code.
//
// Checks 3 and 7 deserve a note up front.
//
// Check 3 (inverse-Poisson closed form): the geometric sum
//   (lam/theta) sum_{k=0}^{[s]} (1+lam/theta)^{k-[t+1]} + (1+lam/theta)^{-[t+1]}
// evaluates to (1+lam/theta)^{[s+1]-[t+1]}. A published variant of the final
// display reads (1+lam/theta)^{-[t+1]} (2 - (1+lam/theta)^{[s+1]}), which
// contradicts the sum it is derived from (it goes negative and violates the
// zero-lag normalization B(t,t) = 1), so the suite pins the bracket against
// the geometric closed form AND against an independently evaluated sum.
//
// Check 7 (condition-number growth): the perturbed family's condition
// numbers are bounded upper by O(m^{(b+1)/2}) and the Rodrigues family's by
// O(e^{T_alpha m}); the check asserts those rates as fitted slopes over
// m in [5, 20]. The exact values (confirmed by two independent routes) give
// a log-log slope of ~0.026 for b = 2 -- the norms of the two sequences
// nearly cancel, kappa stays below 1.09 even at m = 100 -- and a log-linear
// slope of ~0.547 for alpha = 0.6, which is still 17% below its asymptotic
// rate at these indices. Both sub-checks therefore FAIL by construction and
// are reported with the measured values rather than loosened.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spcorr/corrkernel.hpp"
#include "spcorr/eigensystem.hpp"
#include "spcorr/inference.hpp"
#include "spcorr/simulate.hpp"
#include "spcorr/specfun.hpp"
#include "spcorr/subordinate.hpp"

using namespace spcorr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double max_residual(const EigenSystem& sys, int n_max, double tol) {
    double worst = 0.0;
    for (const auto& row : biorthogonality_check(sys, n_max, tol))
        for (double v : row) worst = std::max(worst, v);
    return worst;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion_1() {
    const double t0 = now_s();
    double worst_classical = 0.0;
    worst_classical = max_residual(EigenSystem::Classical(1.0, 30), 20, 1e-9);
    double worst_smallpert = 0.0;
    for (double b : {1.5, 2.0, 4.0})
        worst_smallpert = std::max(worst_smallpert,
                                   max_residual(EigenSystem::SmallPert(b, 30), 10, 1e-8));
    double worst_gl = 0.0;
    worst_gl = std::max(max_residual(EigenSystem::GaussLaguerre(0.6, 1.0, 12), 6, 1e-7),
                        max_residual(EigenSystem::GaussLaguerre(0.4, 2.0, 12), 6, 1e-7));
    const double dt = now_s() - t0;
    const bool pass = worst_classical < 1e-8 && worst_smallpert < 1e-6 && worst_gl < 1e-5 &&
                      dt < 30.0;
    std::ostringstream d;
    d << "classical " << worst_classical << " < 1e-8, smallpert " << worst_smallpert
      << " < 1e-6, gausslag " << worst_gl << " < 1e-5, " << dt << " s < 30 s";
    report(1, pass, "biorthogonality residuals", d.str());
}

void criterion_2() {
    const double t0 = now_s();
    double worst = 0.0;
    std::vector<SubordinatorSpec> specs = {
        SubordinatorSpec::Stable(0.3), SubordinatorSpec::Stable(0.5),
        SubordinatorSpec::Stable(0.8), SubordinatorSpec::Poisson(1.0),
        SubordinatorSpec::Poisson(3.0)};
    for (const auto& spec : specs) {
        const EtaTransform f(spec);
        for (double lam : {0.5, 1.0, 5.0})
            for (double t : {0.5, 1.0, 10.0}) {
                const double lhs =
                    lam * renewal_integral(spec, t, [&](double r) { return f(t - r, lam); }) +
                    f(t, lam);
                worst = std::max(worst, std::abs(lhs - 1.0));
            }
    }
    const double dt = now_s() - t0;
    const bool pass = worst < 1e-6 && dt < 10.0;
    std::ostringstream d;
    d << "max |identity - 1| = " << worst << " < 1e-6, " << dt << " s < 10 s";
    report(2, pass, "renewal identity over stable and Poisson grids", d.str());
}

void criterion_3() {
    double worst_closed = 0.0, worst_sum = 0.0;
    const double theta = 2.0;
    const auto spec = SubordinatorSpec::Poisson(theta);
    const double ts[5] = {2.6, 4.0, 5.5, 8.3, 12.1};
    const double ss[5] = {0.4, 1.1, 1.8, 2.2, 2.5};
    for (double lam : {1.0, 2.0}) {
        const double x = lam / theta;
        for (double t : ts) {
            for (double s : ss) {
                const double bracket = inverse_time_change_bracket(spec, lam, t, s);
                const double closed =
                    std::pow(1.0 + x, std::floor(s + 1.0) - std::floor(t + 1.0));
                // independent evaluation of the displayed sum
                double sum = std::pow(1.0 + x, -(std::floor(t) + 1.0));
                for (int k = 0; k <= static_cast<int>(std::floor(s)); ++k)
                    sum += (lam / theta) * std::pow(1.0 + x, -(std::floor(t - k) + 1.0));
                worst_closed = std::max(worst_closed, std::abs(bracket - closed));
                worst_sum = std::max(worst_sum, std::abs(bracket - sum));
            }
        }
    }
    const bool pass = worst_closed < 1e-12 && worst_sum < 1e-12;
    std::ostringstream d;
    d << "bracket vs geometric closed form " << worst_closed << ", vs independent sum "
      << worst_sum << ", both < 1e-12 [closed form corrected from the published display; "
      << "see the header note]";
    report(3, pass, "inverse-Poisson bracket closed form on a 5x5 grid", d.str());
}

void criterion_4() {
    const auto sys = EigenSystem::Classical(1.0, 10);
    double worst_lo = 1.0, worst_hi = 1.0;
    for (double alpha : {0.5, 0.7}) {
        const auto spec = SubordinatorSpec::Stable(alpha);
        for (double lam : {1.0, 2.0}) {
            const int m = static_cast<int>(lam);
            CorrelationQuery q{m, m, 1e4, 1.0, Pairing::PP, Regime::inverse};
            const double ratio =
                inverse_tc_corr(sys, spec, q) / inverse_tc_asymptotic(sys, spec, q);
            worst_lo = std::min(worst_lo, ratio);
            worst_hi = std::max(worst_hi, ratio);
        }
    }
    const bool pass = worst_lo >= 0.98 && worst_hi <= 1.02;
    std::ostringstream d;
    d << "exact/asymptotic in [" << worst_lo << ", " << worst_hi << "], required [0.98, 1.02]";
    report(4, pass, "stable large-t asymptotics at t = 1e4", d.str());
}

void criterion_5() {
    double worst_half = 0.0, worst_one = 0.0;
    for (double x = 0.1; x <= 5.0 + 1e-12; x += 0.1) {
        worst_half = std::max(worst_half, std::abs(mittag_leffler(0.5, -x) -
                                                   std::exp(x * x) * std::erfc(x)));
        worst_one = std::max(worst_one, std::abs(mittag_leffler(1.0, -x) - std::exp(-x)));
    }
    const bool pass = worst_half < 1e-10 && worst_one < 1e-12;
    std::ostringstream d;
    d << "|E_1/2 - e^{x^2} erfc| = " << worst_half << " < 1e-10, |E_1 - e^{-x}| = "
      << worst_one << " < 1e-12";
    report(5, pass, "Mittag-Leffler closed forms", d.str());
}

void criterion_6() {
    const double t0 = now_s();
    const double beta = 1.0;
    auto f = [beta](double x) { return laguerre_normalized({1, beta}, x); };
    bool pass = true;
    std::ostringstream d;

    {
        SimConfig cfg;
        cfg.paths = 100000;
        cfg.seed = 1001;
        cfg.grid = {0.0, 1.0};
        cfg.beta = beta;
        const auto set = simulate_cir_stationary(cfg);
        const auto r = empirical_lag_corr(set, f, f, 1, 0);
        const double dev = (r.estimate - std::exp(-1.0)) / r.se;
        pass = pass && std::abs(dev) < 3.0;
        d << "markov dev " << dev << " se; ";
    }
    {
        SimConfig cfg;
        cfg.paths = 100000;
        cfg.seed = 1002;
        cfg.grid = {0.0, 1.0};
        cfg.beta = beta;
        const auto set = simulate_bochner(cfg, SubordinatorSpec::Stable(0.5));
        const auto r = empirical_lag_corr(set, f, f, 1, 0);
        const double dev = (r.estimate - std::exp(-1.0)) / r.se;
        pass = pass && std::abs(dev) < 3.0;
        d << "bochner dev " << dev << " se; ";
    }
    {
        SimConfig cfg;
        cfg.paths = 100000;
        cfg.seed = 1003;
        cfg.grid = {1.0, 2.0, 5.0};
        cfg.beta = beta;
        cfg.dt = 1e-3;
        const auto spec = SubordinatorSpec::Stable(0.5);
        const auto set = simulate_inverse_tc(cfg, spec);
        for (std::size_t i : {std::size_t{1}, std::size_t{2}}) {
            const auto r = empirical_lag_corr(set, f, f, i, 0);
            const double want = inverse_time_change_bracket(spec, 1.0, cfg.grid[i], 1.0);
            const double dev = (r.estimate - want) / r.se;
            pass = pass && std::abs(dev) < 3.0;
            d << "inverse(t=" << cfg.grid[i] << ") dev " << dev << " se; ";
        }
    }
    const double dt = now_s() - t0;
    pass = pass && dt < 300.0;
    d << dt << " s < 300 s";
    report(6, pass, "Monte-Carlo regime validation, 1e5 paths, 3 jackknife SE", d.str());
}

void criterion_7() {
    // classical: kappa == 1 to 1e-8
    double worst_classical = 0.0;
    {
        const auto sys = EigenSystem::Classical(1.0, 30);
        for (int m = 5; m <= 20; ++m)
            worst_classical = std::max(worst_classical,
                                       std::abs(condition_number(sys, m) - 1.0));
    }
    // smallpert b=2: log-log slope over m in [5,20] against (b+1)/2
    double slope_sp = 0.0;
    {
        const auto sys = EigenSystem::SmallPert(2.0, 30);
        std::vector<double> xs, ys;
        for (int m = 5; m <= 20; ++m) {
            xs.push_back(std::log(static_cast<double>(m)));
            ys.push_back(std::log(condition_number(sys, m)));
        }
        slope_sp = ls_slope(xs, ys);
    }
    // gausslag alpha=0.6: log-linear slope against T_alpha
    double slope_gl = 0.0;
    const double T_alpha = -std::log(std::pow(2.0, 0.6) - 1.0);
    {
        const auto sys = EigenSystem::GaussLaguerre(0.6, 1.0, 22);
        std::vector<double> xs, ys;
        for (int m = 5; m <= 20; ++m) {
            xs.push_back(static_cast<double>(m));
            ys.push_back(std::log(condition_number(sys, m, 1e-5)));
        }
        slope_gl = ls_slope(xs, ys);
    }
    const bool pass_classical = worst_classical < 1e-8;
    const bool pass_sp = std::abs(slope_sp - 1.5) < 0.15;
    const bool pass_gl = std::abs(slope_gl - T_alpha) < 0.15 * T_alpha;
    std::ostringstream d;
    d << "classical |kappa-1| = " << worst_classical << " < 1e-8 ["
      << (pass_classical ? "ok" : "FAIL") << "]; smallpert slope " << slope_sp
      << " vs 1.5 +- 0.15 [" << (pass_sp ? "ok" : "FAIL")
      << ": the exact kappa stays within 9% of 1 up to m = 100, the quoted rate is an upper "
         "bound that is not attained]; gausslag slope "
      << slope_gl << " vs " << T_alpha << " +- 15% [" << (pass_gl ? "ok" : "FAIL")
      << ": preasymptotic undershoot, the fitted rate reaches the bound only beyond m ~ 25]";
    report(7, pass_classical && pass_sp && pass_gl, "condition-number growth regimes", d.str());
}

void criterion_8() {
    bool pass = true;
    std::ostringstream d;
    // range classifier on noiseless models
    int correct = 0, total = 0;
    for (double c : {0.3, 0.5, 1.0}) {
        std::vector<double> g;
        for (int k = 1; k <= 20; ++k) g.push_back(std::exp(-c * k));
        correct += range_dependence_classifier(g).label == "short-range";
        ++total;
    }
    for (double a : {0.3, 0.5, 1.0}) {
        std::vector<double> g;
        for (int k = 1; k <= 20; ++k) g.push_back(std::pow(k, -a));
        correct += range_dependence_classifier(g).label == "long-range";
        ++total;
    }
    pass = pass && correct == total;
    d << "range " << correct << "/" << total << " correct; ";

    // jump classifier on the three quadrature kappa sequences
    auto kappa_seq = [](const EigenSystem& sys, int m_max, double tol) {
        std::vector<EstimationResult> out;
        for (int m = 1; m <= m_max; ++m) {
            EstimationResult r;
            r.estimate = condition_number(sys, m, tol);
            r.se = 0.0;
            out.push_back(r);
        }
        return out;
    };
    const auto v1 = jump_activity_classifier(kappa_seq(EigenSystem::Classical(1.0, 30), 12, 1e-9));
    const auto v2 = jump_activity_classifier(kappa_seq(EigenSystem::SmallPert(2.0, 30), 20, 1e-9));
    const auto v3 =
        jump_activity_classifier(kappa_seq(EigenSystem::GaussLaguerre(0.6, 1.0, 22), 20, 1e-5));
    pass = pass && v1.label == "pure-diffusion" && v2.label == "finite-activity-jumps" &&
           v3.label == "infinite-activity-jumps";
    d << "jump labels: classical=" << v1.label << ", smallpert=" << v2.label
      << ", gausslag=" << v3.label;
    report(8, pass, "classifier correctness", d.str());
}

void criterion_9() {
    const std::string bin = SPCORR_BIN;
    const fs::path work = SPCORR_WORKDIR;
    fs::create_directories(work);
    int good = 0;
    const int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
        const fs::path paths = work / ("c9_" + std::to_string(rep) + ".csv");
        const fs::path verdict = work / ("c9_" + std::to_string(rep) + ".json");
        std::string cmd = bin + " simulate --family classical --beta 1 --regime markov"
                                " --paths 50000 --grid 0,1 --seed " +
                          std::to_string(9000 + rep) + " --out " + paths.string() +
                          " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) continue;
        cmd = bin + " estimate --input " + paths.string() +
              " --candidates \"classical:1;smallpert:2\" --m 2 --out " + verdict.string() +
              " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) continue;
        nlohmann::json v;
        std::ifstream(verdict) >> v;
        bool classical_accepted = false, smallpert_accepted = false;
        for (const auto& name : v.at("symmetry").at(0).at("accepted")) {
            const std::string s = name.get<std::string>();
            classical_accepted |= s.find("classical") != std::string::npos;
            smallpert_accepted |= s.find("smallpert") != std::string::npos;
        }
        if (classical_accepted && !smallpert_accepted) ++good;
        fs::remove(paths);
        fs::remove(paths.string() + ".manifest.json");
        fs::remove(verdict);
        fs::remove(verdict.string() + ".manifest.json");
    }
    const bool pass = good >= 19;  // >= 95% of 20
    std::ostringstream d;
    d << good << "/" << reps << " repetitions accept classical and reject smallpert(b=2)";
    report(9, pass, "end-to-end inference through the command line", d.str());
}

void criterion_10() {
    const auto sys = EigenSystem::Classical(1.0, 10);
    const auto drift = SubordinatorSpec::Generic(1.0);
    double worst = 0.0;
    int points = 0;
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n)
            for (double t : {0.5, 2.0})
                for (double s : {0.25, 1.0}) {
                    const CorrelationQuery q{m, n, t, s, (m + n) % 2 == 0 ? Pairing::PP : Pairing::PV,
                                             Regime::bochner};
                    worst = std::max(worst,
                                     std::abs(bochner_corr(sys, drift, q) - markov_corr(sys, q)));
                    ++points;
                }
    const bool pass = worst < 1e-14 && points >= 100;
    std::ostringstream d;
    d << "max |bochner(drift) - markov| = " << worst << " over " << points << " queries";
    report(10, pass, "regime degeneration under a pure-drift clock", d.str());
}

}  // namespace

int main(int argc, char** argv) {
    void (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 64;
        }
        criteria[id - 1]();
        return g_failures;
    }
    std::printf("acceptance suite, tolerances pinned in code\n");
    for (auto* c : criteria) c();
    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
