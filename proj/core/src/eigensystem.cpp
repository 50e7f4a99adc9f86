#include "spcorr/eigensystem.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "spcorr/errors.hpp"
#include "spcorr/specfun.hpp"

namespace spcorr {

EigenSystem EigenSystem::Classical(double beta, int n_max) {
    EigenSystem sys;
    sys.family = Family::classical;
    sys.name = "classical";
    sys.measure = DensityMeasure::GammaBeta(beta);
    sys.n_max = n_max;
    sys.lambda_ = [](int n) { return static_cast<double>(n); };
    auto ell = [beta](int n, double x) { return laguerre_normalized({n, beta}, x); };
    sys.eigen_ = ell;
    sys.coeigen_ = ell;  // self-adjoint
    return sys;
}

EigenSystem EigenSystem::SmallPert(double b, int n_max) {
    EigenSystem sys;
    sys.family = Family::smallpert;
    sys.name = "smallpert";
    sys.measure = DensityMeasure::NuB(b);
    sys.n_max = n_max;
    sys.lambda_ = [](int n) { return static_cast<double>(n); };
    sys.eigen_ = [b](int n, double x) { return smallpert_eigen_p(b, n, x); };
    sys.coeigen_ = [b](int n, double x) { return smallpert_coeigen_v(b, n, x); };
    return sys;
}

namespace {

// Closed-form biorthogonality pairings for the Rodrigues family: P_n is a
// polynomial in x, V_n a polynomial in x^{1/alpha}, and every moment is a
// Gamma ratio, E[X^r] = Gamma(alpha r + alpha b + 1) / Gamma(alpha b + 1),
// so <P_n, V_m> reduces to a finite signed sum evaluated in log space.
// The substituted quadrature rule only converges algebraically for the
// fractional monomials x^{alpha k}, which is why the family carries this
// exact route for the pairing. The <P,P> and <V,V> moment sums cancel
// catastrophically past m ~ 12 (amplification ~1e15 at m = 20), so norms
// stay on the quadrature route: V_m^2 is a polynomial in x^{1/alpha} that
// the substituted rule integrates exactly, and <P,P> is O(1) with an
// acceptable algebraic tail.
struct GaussLagAlgebra {
    double alpha, b;
    std::vector<std::vector<double>> lp;  // log |P-coefficient|, sign (-1)^i
    std::vector<std::vector<double>> lv;  // log |V-coefficient|
    std::vector<std::vector<int>> sv;     // V-coefficient signs
    std::vector<std::vector<double>> vcoeffs;

    GaussLagAlgebra(double alpha_, double b_, int n_max) : alpha(alpha_), b(b_) {
        const GLCoefficients table = GLCoefficients::gauss_laguerre(alpha, b, n_max);
        lp.resize(n_max + 1);
        lv.resize(n_max + 1);
        sv.resize(n_max + 1);
        vcoeffs.resize(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            lp[n].resize(n + 1);
            const double lgn = std::lgamma(n + 1.0);
            for (int i = 0; i <= n; ++i)
                lp[n][i] = lgn - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                           table.wphi_log[i];
            vcoeffs[n] = gauss_laguerre_coeigen_coeffs(alpha, b, n, n_max);
            lv[n].resize(n + 1);
            sv[n].resize(n + 1);
            for (int k = 0; k <= n; ++k) {
                lv[n][k] = std::log(std::abs(vcoeffs[n][k]) + 1e-320);
                sv[n][k] = vcoeffs[n][k] >= 0.0 ? 1 : -1;
            }
        }
    }

    double log_moment(double r) const {
        return std::lgamma(alpha * r + alpha * b + 1.0) - std::lgamma(alpha * b + 1.0);
    }

    // The signed moment sums lose ~n+m digits to cancellation; beyond this
    // cutoff the quadrature route is the accurate one.
    static bool moments_usable(int n, int m) { return n + m <= 12; }

    double pp(int n, int m) const {
        std::vector<double> terms;
        terms.reserve((n + 1) * (m + 1));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= m; ++j) {
                const double mag = std::exp(lp[n][i] + lp[m][j] + log_moment(i + j));
                terms.push_back((i + j) % 2 == 0 ? mag : -mag);
            }
        return compensated_sum(terms);
    }

    double vv(int n, int m) const {
        std::vector<double> terms;
        terms.reserve((n + 1) * (m + 1));
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= m; ++l) {
                const double mag = std::exp(lv[n][k] + lv[m][l] + log_moment((k + l) / alpha));
                terms.push_back(sv[n][k] * sv[m][l] * mag);
            }
        return compensated_sum(terms);
    }

    double pv(int n, int m) const {
        std::vector<double> terms;
        terms.reserve((n + 1) * (m + 1));
        for (int i = 0; i <= n; ++i)
            for (int k = 0; k <= m; ++k) {
                const double mag = std::exp(lp[n][i] + lv[m][k] + log_moment(i + k / alpha));
                const int sign = (i % 2 == 0 ? 1 : -1) * sv[m][k];
                terms.push_back(sign * mag);
            }
        return compensated_sum(terms);
    }

    // V_n(x) evaluated from the cached coefficients in y = x^{1/alpha}.
    double eval_v(int n, double x) const {
        const double y = std::pow(x, 1.0 / alpha);
        const auto& c = vcoeffs[n];
        double acc = c[n];
        for (int k = n - 1; k >= 0; --k) acc = acc * y + c[k];
        return acc;
    }
};

}  // namespace

EigenSystem EigenSystem::GaussLaguerre(double alpha, double b, int n_max) {
    EigenSystem sys;
    sys.family = Family::gausslag;
    sys.name = "gausslag";
    sys.measure = DensityMeasure::EAlphaB(alpha, b);
    sys.n_max = n_max;
    sys.lambda_ = [](int n) { return static_cast<double>(n); };
    auto coeffs = std::make_shared<GLCoefficients>(GLCoefficients::gauss_laguerre(alpha, b, n_max));
    auto alg = std::make_shared<GaussLagAlgebra>(alpha, b, n_max);
    sys.eigen_ = [coeffs](int n, double x) { return gl_eigen_p(*coeffs, n, x); };
    sys.coeigen_ = [alg](int n, double x) { return alg->eval_v(n, x); };
    sys.exact_pp_ = [alg](int n, int m) -> std::optional<double> {
        if (!GaussLagAlgebra::moments_usable(n, m)) return std::nullopt;
        return alg->pp(n, m);
    };
    sys.exact_pv_ = [alg](int n, int m) -> std::optional<double> {
        if (!GaussLagAlgebra::moments_usable(n, m)) return std::nullopt;
        return alg->pv(n, m);
    };
    sys.exact_vv_ = [alg](int n, int m) -> std::optional<double> {
        if (!GaussLagAlgebra::moments_usable(n, m)) return std::nullopt;
        return alg->vv(n, m);
    };
    return sys;
}

EigenSystem EigenSystem::Custom(std::string name, DensityMeasure measure,
                                std::function<double(int)> lambda,
                                std::function<double(int, double)> eigen,
                                std::function<double(int, double)> coeigen, int n_max) {
    EigenSystem sys;
    sys.family = Family::custom;
    sys.name = std::move(name);
    sys.measure = std::move(measure);
    sys.n_max = n_max;
    sys.lambda_ = std::move(lambda);
    sys.eigen_ = std::move(eigen);
    sys.coeigen_ = std::move(coeigen);
    if (sys.lambda_(0) != 0.0)
        throw std::invalid_argument("EigenSystem: lambda_0 must be 0");
    std::set<double> seen;
    for (int n = 0; n <= n_max; ++n) {
        const double l = sys.lambda_(n);
        if (l < 0.0) throw std::invalid_argument("EigenSystem: eigenvalues must be >= 0");
        if (!seen.insert(l).second)
            throw std::invalid_argument("EigenSystem: duplicate eigenvalue (multiplicity > 1)");
    }
    return sys;
}

double default_quadrature_tol(const EigenSystem& sys) {
    return sys.family == EigenSystem::Family::gausslag ? 1e-5 : 1e-9;
}

double system_inner_product(const EigenSystem& sys, char a, int n, char b, int m,
                            double tol) {
    std::optional<double> exact;
    if (a == 'P' && b == 'P' && sys.exact_pp_) exact = sys.exact_pp_(n, m);
    if (a == 'P' && b == 'V' && sys.exact_pv_) exact = sys.exact_pv_(n, m);
    if (a == 'V' && b == 'P' && sys.exact_pv_) exact = sys.exact_pv_(m, n);
    if (a == 'V' && b == 'V' && sys.exact_vv_) exact = sys.exact_vv_(n, m);
    if (exact) return *exact;
    auto eval = [&](char which, int idx) {
        return [&sys, which, idx](double x) {
            return which == 'P' ? sys.P(idx, x) : sys.V(idx, x);
        };
    };
    return inner_product(eval(a, n), eval(b, m), sys.measure, tol).value;
}

double EigenSystem::cached_kappa(int m, double tol) const {
    {
        std::lock_guard<std::mutex> lock(*cache_mutex_);
        auto it = kappa_cache_.find(m);
        if (it != kappa_cache_.end() && it->second.tol <= tol) return it->second.value;
    }
    const double kappa = std::sqrt(system_inner_product(*this, 'P', m, 'P', m, tol)) *
                         std::sqrt(system_inner_product(*this, 'V', m, 'V', m, tol));
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    kappa_cache_[m] = {kappa, tol};
    return kappa;
}

double EigenSystem::cached_cosine(int n, int m, double tol) const {
    const auto key = std::make_pair(std::min(n, m), std::max(n, m));
    {
        std::lock_guard<std::mutex> lock(*cache_mutex_);
        auto it = cosine_cache_.find(key);
        if (it != cosine_cache_.end() && it->second.tol <= tol) return it->second.value;
    }
    double value;
    if (n == m) {
        value = 1.0;
    } else {
        const double pp = system_inner_product(*this, 'P', n, 'P', m, tol);
        const double nn = system_inner_product(*this, 'P', n, 'P', n, tol);
        const double mm = system_inner_product(*this, 'P', m, 'P', m, tol);
        value = pp / std::sqrt(nn * mm);
        if (value > 1.0) value = 1.0;
        if (value < -1.0) value = -1.0;
    }
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    cosine_cache_[key] = {value, tol};
    return value;
}

double condition_number(const EigenSystem& sys, int m, double tol) {
    if (m < 0 || m > sys.n_max)
        throw std::out_of_range("condition_number: index outside system range");
    const double kappa = sys.cached_kappa(m, tol);
    if (kappa < 1.0 - 1e-6)
        throw std::runtime_error("condition_number: computed value " + std::to_string(kappa) +
                                 " violates the Cauchy-Schwarz lower bound 1");
    return kappa;
}

double cosine_angle(const EigenSystem& sys, int n, int m, double tol) {
    if (n < 0 || n > sys.n_max || m < 0 || m > sys.n_max)
        throw std::out_of_range("cosine_angle: index outside system range");
    return sys.cached_cosine(n, m, tol);
}

std::vector<std::vector<double>> biorthogonality_check(const EigenSystem& sys, int n_max,
                                                       double tol) {
    if (n_max > sys.n_max)
        throw std::out_of_range("biorthogonality_check: n_max exceeds system range");
    std::vector<std::vector<double>> residuals(n_max + 1, std::vector<double>(n_max + 1));
    for (int n = 0; n <= n_max; ++n) {
        for (int m = 0; m <= n_max; ++m) {
            const double ip = system_inner_product(sys, 'P', n, 'V', m, tol);
            residuals[n][m] = std::abs(ip - (n == m ? 1.0 : 0.0));
        }
    }
    return residuals;
}

}  // namespace spcorr
