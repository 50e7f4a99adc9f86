#include "spcorr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spcorr/errors.hpp"

namespace spcorr {

namespace {

struct MomentSums {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    std::size_t n = 0;

    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++n;
    }
    void subtract(const MomentSums& o) {
        sx -= o.sx;
        sy -= o.sy;
        sxx -= o.sxx;
        syy -= o.syy;
        sxy -= o.sxy;
        n -= o.n;
    }
    double pearson(bool* degenerate = nullptr) const {
        const double vx = sxx - sx * sx / n;
        const double vy = syy - sy * sy / n;
        const double scale = std::max(std::abs(sxx), std::abs(syy)) + 1e-300;
        if (vx <= scale * 1e-14 || vy <= scale * 1e-14) {
            if (degenerate) *degenerate = true;
            return 0.0;
        }
        if (degenerate) *degenerate = false;
        return (sxy - sx * sy / n) / std::sqrt(vx * vy);
    }
};

struct LinearFit {
    double slope = 0, intercept = 0, rss = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    return f;
}

}  // namespace

EstimationResult empirical_corr(std::span<const double> xs, std::span<const double> ys,
                                std::size_t block) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("empirical_corr: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw std::invalid_argument("empirical_corr: need at least 3 pairs");

    if (block < 1) block = 1;
    if (n < 10 * block) block = std::max<std::size_t>(1, n / 10);
    const std::size_t nblocks = (n + block - 1) / block;

    std::vector<MomentSums> blocks(nblocks);
    MomentSums total;
    for (std::size_t i = 0; i < n; ++i) {
        blocks[i / block].add(xs[i], ys[i]);
        total.add(xs[i], ys[i]);
    }

    EstimationResult r;
    r.sample_size = n;
    r.method = "pearson/block-jackknife(" + std::to_string(block) + ")";
    bool degenerate = false;
    r.estimate = total.pearson(&degenerate);
    if (degenerate) {
        r.degenerate = true;
        r.estimate = 0.0;  // zero-variance branch of the correlation definition
        r.se = 0.0;
        return r;
    }
    if (nblocks >= 2) {
        std::vector<double> loo(nblocks);
        double mean = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            MomentSums rest = total;
            rest.subtract(blocks[b]);
            loo[b] = rest.pearson();
            mean += loo[b];
        }
        mean /= nblocks;
        double ss = 0.0;
        for (double v : loo) ss += (v - mean) * (v - mean);
        r.se = std::sqrt(ss * (nblocks - 1.0) / nblocks);
    } else {
        r.se = (1.0 - r.estimate * r.estimate) / std::sqrt(static_cast<double>(n));
    }
    return r;
}

EstimationResult kappa_hat(const EigenSystem& sys, std::span<const double> sample, int m,
                           double rho_floor) {
    if (m < 1 || m > sys.n_max)
        throw std::out_of_range("kappa_hat: index outside system range");
    std::vector<double> ps(sample.size()), vs(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        ps[i] = sys.P(m, sample[i]);
        vs[i] = sys.V(m, sample[i]);
    }
    const EstimationResult rho = empirical_corr(ps, vs);
    if (rho.degenerate)
        throw DegenerateSampleError("kappa_hat: sample variance is zero at m = " +
                                    std::to_string(m));
    if (std::abs(rho.estimate) < rho_floor)
        throw UnstableInversionError("kappa_hat: |rho_hat| = " +
                                     std::to_string(std::abs(rho.estimate)) +
                                     " below the inversion floor at m = " + std::to_string(m));
    EstimationResult r;
    r.estimate = 1.0 / rho.estimate;
    r.se = rho.se / (rho.estimate * rho.estimate);  // delta method for 1/rho
    r.sample_size = rho.sample_size;
    r.method = "kappa_hat=1/rho_hat, delta-method SE";
    return r;
}

SymmetryVerdict symmetry_test(const std::vector<const EigenSystem*>& candidates,
                              std::span<const double> sample, int m, double eps) {
    if (candidates.empty()) throw std::invalid_argument("symmetry_test: no candidates");
    SymmetryVerdict verdict;
    verdict.m = m;
    std::size_t usable = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const EigenSystem& sys = *candidates[i];
        SymmetryCandidate c;
        c.name = sys.name + "/" + sys.measure.name();
        try {
            const double theory = condition_number(sys, m, default_quadrature_tol(sys));
            const EstimationResult est = kappa_hat(sys, sample, m);
            c.kappa_theory = theory;
            c.kappa_estimate = est.estimate;
            c.kappa_se = est.se;
            c.distance = std::abs(theory - est.estimate);
            // Self-adjoint candidates have P = V, so rho_hat is exactly 1
            // with zero jackknife variance; the floor keeps the default
            // threshold usable for them.
            c.eps_used = eps > 0.0 ? eps : std::max(3.0 * est.se, 1e-8);
            c.accepted = c.distance < c.eps_used;
            ++usable;
        } catch (const std::exception& e) {
            c.note = e.what();
            c.accepted = false;
        }
        if (c.accepted) verdict.accepted.push_back(i);
        verdict.candidates.push_back(std::move(c));
    }
    if (usable == 0)
        throw DegenerateSampleError("symmetry_test: every candidate was degenerate");
    return verdict;
}

std::vector<GLambdaPoint> g_lambda(const EigenSystem& sys,
                                   const std::vector<std::vector<double>>& sample_by_time,
                                   int m, std::size_t j) {
    if (sample_by_time.empty()) throw std::invalid_argument("g_lambda: empty sample");
    const std::size_t T = sample_by_time.front().size();
    for (const auto& row : sample_by_time)
        if (row.size() != T) throw std::invalid_argument("g_lambda: ragged sample matrix");
    if (j + 1 >= T) throw std::invalid_argument("g_lambda: base index j has no lags after it");
    const std::size_t paths = sample_by_time.size();

    // kappa_hat from the time-j cross-section (ensemble) or the whole
    // trajectory (single path; stationarity makes the pooled sample valid).
    std::vector<double> base;
    if (paths > 1) {
        base.reserve(paths);
        for (const auto& row : sample_by_time) base.push_back(row[j]);
    } else {
        base = sample_by_time.front();
    }
    const EstimationResult kh = kappa_hat(sys, base, m);

    std::vector<GLambdaPoint> out;
    for (std::size_t k = j + 1; k < T; ++k) {
        GLambdaPoint pt;
        pt.k = k;
        EstimationResult rho;
        if (paths > 1) {
            std::vector<double> ps(paths), vs(paths);
            for (std::size_t p = 0; p < paths; ++p) {
                ps[p] = sys.P(m, sample_by_time[p][k]);
                vs[p] = sys.V(m, sample_by_time[p][j]);
            }
            rho = empirical_corr(ps, vs);
        } else {
            // overlapping stationary pairs at lag k - j
            const auto& row = sample_by_time.front();
            const std::size_t lag = k - j;
            std::vector<double> ps, vs;
            ps.reserve(T - lag);
            vs.reserve(T - lag);
            for (std::size_t i = 0; i + lag < T; ++i) {
                ps.push_back(sys.P(m, row[i + lag]));
                vs.push_back(sys.V(m, row[i]));
            }
            rho = empirical_corr(ps, vs);
        }
        pt.rho = rho.estimate;
        pt.se = rho.se;
        pt.degenerate = rho.degenerate;
        pt.g = kh.estimate * rho.estimate;
        out.push_back(pt);
    }
    return out;
}

namespace {

ClassifierVerdict classify_range(const std::vector<std::size_t>& ks,
                                 const std::vector<double>& gs, std::size_t dropped) {
    ClassifierVerdict v;
    if (ks.size() < 8)
        throw std::invalid_argument("range_dependence_classifier: fewer than 8 usable lags");
    std::vector<double> k_lin(ks.size()), k_log(ks.size()), logg(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        k_lin[i] = static_cast<double>(ks[i]);
        k_log[i] = std::log(static_cast<double>(ks[i]));
        logg[i] = std::log(gs[i]);
    }
    const LinearFit expo = least_squares(k_lin, logg);
    const LinearFit power = least_squares(k_log, logg);
    const double tiny = 1e-300;
    const double ratio = (expo.rss + tiny) / (power.rss + tiny);
    v.scores["rss_exponential"] = expo.rss;
    v.scores["rss_power"] = power.rss;
    v.scores["rss_ratio"] = ratio;
    v.scores["dropped_nonpositive"] = static_cast<double>(dropped);
    v.fitted["exponential_rate"] = -expo.slope;
    v.fitted["power_exponent"] = -power.slope;
    v.fitted["exponential_intercept"] = expo.intercept;
    v.fitted["power_intercept"] = power.intercept;
    if (ratio < 0.8)
        v.label = "short-range";
    else if (ratio > 1.25)
        v.label = "long-range";
    else
        v.label = "ambiguous";
    std::ostringstream oss;
    oss << "exp rate " << -expo.slope << " (rss " << expo.rss << "), power exponent "
        << -power.slope << " (rss " << power.rss << "), ratio " << ratio;
    if (dropped > 0) oss << "; dropped " << dropped << " nonpositive lag values";
    v.diagnostics = oss.str();
    return v;
}

}  // namespace

ClassifierVerdict range_dependence_classifier(const std::vector<GLambdaPoint>& g) {
    std::vector<std::size_t> ks;
    std::vector<double> gs;
    std::size_t dropped = 0;
    for (const auto& pt : g) {
        if (pt.degenerate || !(pt.g > 0.0)) {
            ++dropped;
            continue;
        }
        ks.push_back(pt.k);
        gs.push_back(pt.g);
    }
    return classify_range(ks, gs, dropped);
}

ClassifierVerdict range_dependence_classifier(const std::vector<double>& g, int k_start) {
    std::vector<std::size_t> ks;
    std::vector<double> gs;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0)) {
            ++dropped;
            continue;
        }
        ks.push_back(static_cast<std::size_t>(k_start) + i);
        gs.push_back(g[i]);
    }
    return classify_range(ks, gs, dropped);
}

ClassifierVerdict jump_activity_classifier(const std::vector<EstimationResult>& kappas,
                                           int m_start) {
    if (kappas.size() < 6)
        throw std::invalid_argument("jump_activity_classifier: need at least 6 indices");
    ClassifierVerdict v;

    // (i): every kappa within 3 SE of 1 (with an absolute floor so exact
    // quadrature sequences with se = 0 still classify).
    constexpr double kAtolFloor = 1e-6;
    bool all_one = true;
    for (const auto& k : kappas)
        if (std::abs(k.estimate - 1.0) > std::max(3.0 * k.se, kAtolFloor)) {
            all_one = false;
            break;
        }
    if (all_one) {
        v.label = "pure-diffusion";
        v.diagnostics = "all condition numbers within tolerance of 1";
        v.fitted["kappa_max_deviation"] = [&] {
            double d = 0;
            for (const auto& k : kappas) d = std::max(d, std::abs(k.estimate - 1.0));
            return d;
        }();
        return v;
    }

    // Documented fit window: growth regimes are asymptotic statements, so
    // the fits ignore the small-m transient and start at m = 5 whenever at
    // least 6 points remain.
    constexpr int kFitWindowStart = 5;
    std::size_t first = 0;
    if (m_start < kFitWindowStart) {
        const std::size_t skip =
            static_cast<std::size_t>(kFitWindowStart - m_start);
        if (kappas.size() >= skip + 6) first = skip;
    }

    std::vector<double> m_lin, m_log, logk;
    for (std::size_t i = first; i < kappas.size(); ++i) {
        const double m = static_cast<double>(m_start) + static_cast<double>(i);
        m_lin.push_back(m);
        m_log.push_back(std::log(m));
        logk.push_back(std::log(std::max(kappas[i].estimate, 1e-300)));
    }
    const LinearFit power = least_squares(m_log, logk);  // (ii)
    const LinearFit expo = least_squares(m_lin, logk);   // (iii)
    // (iv): stretched exponents distinctly above 1. Shapes with beta in
    // (1, 1.5) are indistinguishable from an exponential with a drifting
    // rate on windows this short, so the pure-jump regime only claims
    // markedly super-exponential growth and boundary cases resolve to (iii).
    LinearFit stretched;
    double best_beta = 0.0;
    stretched.rss = std::numeric_limits<double>::infinity();
    for (double beta : {1.5, 2.0, 3.0}) {
        std::vector<double> m_pow(m_lin.size());
        for (std::size_t i = 0; i < m_lin.size(); ++i) m_pow[i] = std::pow(m_lin[i], beta);
        const LinearFit f = least_squares(m_pow, logk);
        if (f.rss < stretched.rss) {
            stretched = f;
            best_beta = beta;
        }
    }

    v.scores["rss_power"] = power.rss;
    v.scores["rss_exponential"] = expo.rss;
    v.scores["rss_stretched"] = stretched.rss;
    v.scores["fit_window_start"] = static_cast<double>(m_start) + static_cast<double>(first);
    v.fitted["power_exponent"] = power.slope;
    v.fitted["exponential_slope"] = expo.slope;
    v.fitted["stretched_beta"] = best_beta;
    v.fitted["stretched_slope"] = stretched.slope;

    // Best RSS wins; a near-tie (ratio within [0.8, 1.25]) resolves to the
    // earlier regime in the order (ii) < (iii) < (iv).
    const double tiny = 1e-300;
    struct Entry {
        const char* label;
        double rss;
    };
    const Entry order[] = {{"finite-activity-jumps", power.rss},
                           {"infinite-activity-jumps", expo.rss},
                           {"pure-jump", stretched.rss}};
    const double best = std::min({power.rss, expo.rss, stretched.rss});
    std::string label;
    bool near_tie = false;
    for (const auto& e : order) {
        const double ratio = (e.rss + tiny) / (best + tiny);
        if (ratio <= 1.25) {
            label = e.label;
            near_tie = e.rss != best;
            break;
        }
    }
    v.label = label;
    std::ostringstream oss;
    oss << "rss power " << power.rss << ", exponential " << expo.rss << ", stretched(beta="
        << best_beta << ") " << stretched.rss << " over m >= " << m_lin.front();
    if (near_tie) oss << "; near-tie resolved to the lower-complexity regime";
    v.diagnostics = oss.str();
    return v;
}

}  // namespace spcorr
