#include "spcorr/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spcorr {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_laguerre_args(const LaguerreParams& p, double x) {
    if (p.n < 0) throw std::invalid_argument("laguerre: degree must be >= 0");
    if (!(p.beta > -1.0)) throw std::invalid_argument("laguerre: order must be > -1");
    if (x < 0.0) throw std::invalid_argument("laguerre: x must be >= 0");
}

}  // namespace

double compensated_sum(const std::vector<double>& terms) {
    double sum = 0.0, comp = 0.0;
    for (double t : terms) {
        const double next = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - next) + t;
        else
            comp += (t - next) + sum;
        sum = next;
    }
    return sum + comp;
}

double laguerre(const LaguerreParams& p, double x) {
    check_laguerre_args(p, x);
    if (p.n == 0) return 1.0;
    double prev = 1.0;                 // L_0
    double cur = 1.0 + p.beta - x;     // L_1
    for (int k = 1; k < p.n; ++k) {
        const double next =
            ((2.0 * k + 1.0 + p.beta - x) * cur - (k + p.beta) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double laguerre_norm_constant(int n, double beta) {
    return std::exp(std::lgamma(n + 1.0) + std::lgamma(beta + 1.0) -
                    std::lgamma(n + beta + 1.0));
}

double laguerre_normalized(const LaguerreParams& p, double x) {
    check_laguerre_args(p, x);
    return std::sqrt(laguerre_norm_constant(p.n, p.beta)) * laguerre(p, x);
}

namespace {

// Power series in extended precision.  Unusable when the alternating terms
// grow large (small alpha, moderate |z|): the caller falls back to the
// integral representation when the running maximum exceeds the cap.
bool ml_series(double alpha, double x, double* out) {
    const long double lx = std::log(static_cast<long double>(x));
    long double sum = 1.0L, comp = 0.0L;
    long double max_mag = 1.0L;
    long double prev_mag = 1.0L;
    for (int k = 1; k < 20000; ++k) {
        const long double mag = std::exp(k * lx - std::lgamma(static_cast<long double>(alpha) * k + 1.0L));
        max_mag = std::max(max_mag, mag);
        if (max_mag > 1e7L) return false;
        const long double term = (k % 2 == 0) ? mag : -mag;
        const long double next = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - next) + term;
        else
            comp += (term - next) + sum;
        sum = next;
        if (mag < 1e-19L && mag < prev_mag) {
            *out = static_cast<double>(sum + comp);
            return true;
        }
        prev_mag = mag;
    }
    return false;
}

// Spectral representation of the completely monotone t -> E_alpha(-t^alpha),
// 0 < alpha < 1 (density K_alpha(r) = sin(alpha pi) r^{alpha-1} / (pi
// (r^{2 alpha} + 2 r^alpha cos(alpha pi) + 1))).  Evaluated at t = x^{1/alpha}
// and substituted with u = r^alpha, which removes the r^{alpha-1} factor:
//   E_alpha(-x) = sin(alpha pi)/(alpha pi)
//                 * int_0^inf exp(-(u x)^{1/alpha}) / (u^2 + 2 u cos(alpha pi) + 1) du.
// The denominator is bounded below by sin^2(alpha pi), with its minimum at
// u = 1, so the panels split there.
double ml_integral(double alpha, double x) {
    using boost::math::quadrature::gauss_kronrod;
    const double c = std::cos(alpha * kPi);
    const double ia = 1.0 / alpha;
    auto f = [&](double u) {
        return std::exp(-std::pow(u * x, ia)) / ((u + 2.0 * c) * u + 1.0);
    };
    double acc = 0.0;
    acc += gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 12, 1e-13);
    // Doubling panels until the tail bound exp(-(upper x)^{1/alpha})/upper is negligible.
    double lo = 1.0, hi = 2.0;
    for (int i = 0; i < 64; ++i) {
        acc += gauss_kronrod<double, 15>::integrate(f, lo, hi, 12, 1e-13);
        if (std::exp(-std::pow(hi * x, ia)) / hi < 1e-17) break;
        lo = hi;
        hi *= 2.0;
    }
    return std::sin(alpha * kPi) / (alpha * kPi) * acc;
}

// Large-argument expansion E_alpha(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1-alpha k),
// truncated at the smallest term.  1/Gamma at nonpositive integers is zero;
// elsewhere on w <= 0 it is evaluated through the reflection formula.
double ml_asymptotic(double alpha, double x) {
    std::vector<double> terms;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 200; ++k) {
        const double w = 1.0 - alpha * k;
        double inv_gamma;
        if (w > 1e-12) {
            inv_gamma = std::exp(-std::lgamma(w));
        } else if (std::abs(w - std::round(w)) < 1e-12) {
            inv_gamma = 0.0;
        } else {
            inv_gamma = std::sin(kPi * w) * std::exp(std::lgamma(1.0 - w)) / kPi;
        }
        const double term = ((k % 2 == 1) ? 1.0 : -1.0) * std::pow(x, -k) * inv_gamma;
        const double mag = std::abs(term);
        if (mag > prev_mag) break;  // past the optimal truncation point
        terms.push_back(term);
        if (mag < 1e-18 && mag > 0.0) break;
        if (mag > 0.0) prev_mag = mag;
    }
    return compensated_sum(terms);
}

}  // namespace

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("mittag_leffler: alpha must be in (0, 1]");
    if (z > 0.0) throw std::invalid_argument("mittag_leffler: z must be <= 0");
    if (z == 0.0) return 1.0;
    if (alpha == 1.0) return std::exp(z);
    const double x = -z;
    if (x <= 5.0) {
        double v;
        if (ml_series(alpha, x, &v)) return v;
    }
    if (x >= 50.0) return ml_asymptotic(alpha, x);
    return ml_integral(alpha, x);
}

GLCoefficients GLCoefficients::from_phi(const std::function<double(double)>& phi, int n_max,
                                        std::string family_tag) {
    if (n_max < 0) throw std::invalid_argument("GLCoefficients: n_max must be >= 0");
    GLCoefficients c;
    c.family = std::move(family_tag);
    c.wphi_log.resize(n_max + 1);
    c.wphi_log[0] = 0.0;  // W_phi(1) = 1
    for (int k = 1; k <= n_max; ++k) {
        const double pk = phi(static_cast<double>(k));
        if (!(pk > 0.0)) throw std::invalid_argument("GLCoefficients: phi(k) must be > 0");
        c.wphi_log[k] = c.wphi_log[k - 1] + std::log(pk);
    }
    return c;
}

GLCoefficients GLCoefficients::classical(int n_max) {
    return from_phi([](double k) { return k; }, n_max, "classical");
}

GLCoefficients GLCoefficients::gauss_laguerre(double alpha, double b, int n_max) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("GLCoefficients: alpha must be in (0,1)");
    GLCoefficients c;
    c.family = "gauss_laguerre";
    c.wphi_log.resize(n_max + 1);
    const double base = std::lgamma(alpha * b + 1.0);
    for (int k = 0; k <= n_max; ++k)
        c.wphi_log[k] = std::lgamma(alpha * k + alpha * b + 1.0) - base;
    return c;
}

double gl_eigen_p(const GLCoefficients& coeffs, int n, double x) {
    if (n < 0 || n > coeffs.max_degree())
        throw std::out_of_range("gl_eigen_p: degree outside the coefficient table");
    if (x < 0.0) throw std::invalid_argument("gl_eigen_p: x must be >= 0");
    if (n == 0) return 1.0;
    if (x == 0.0) return 1.0;  // only the k = 0 term survives
    const long double lx = std::log(static_cast<long double>(x));
    const long double lgn = std::lgamma(n + 1.0L);
    // Extended-precision Neumaier accumulation: the alternating terms grow
    // well past the result for moderate n * x.
    long double sum = 0.0L, comp = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const long double log_binom = lgn - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
        const long double mag =
            std::exp(log_binom + k * lx - static_cast<long double>(coeffs.wphi_log[k]));
        const long double t = (k % 2 == 0) ? mag : -mag;
        const long double next = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - next) + t;
        else
            comp += (t - next) + sum;
        sum = next;
    }
    return static_cast<double>(sum + comp);
}

double smallpert_eigen_p(double b, int n, double x) {
    if (!(b >= 1.0)) throw std::invalid_argument("smallpert_eigen_p: b must be >= 1");
    if (n < 0) throw std::invalid_argument("smallpert_eigen_p: n must be >= 0");
    if (x < 0.0) throw std::invalid_argument("smallpert_eigen_p: x must be >= 0");
    const double cn = laguerre_norm_constant(n, b + 1.0);
    double value = cn * laguerre({n, b + 1.0}, x);
    if (n >= 1) value -= cn / b * x * laguerre({n - 1, b + 2.0}, x);
    return value;
}

double smallpert_coeigen_v(double b, int n, double x) {
    if (!(b >= 1.0)) throw std::invalid_argument("smallpert_coeigen_v: b must be >= 1");
    if (n < 0) throw std::invalid_argument("smallpert_coeigen_v: n must be >= 0");
    if (x < 0.0) throw std::invalid_argument("smallpert_coeigen_v: x must be >= 0");
    return (laguerre({n, b - 1.0}, x) + x * laguerre({n, b}, x)) / (x + 1.0);
}

double ExpTermSum::eval(double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("ExpTermSum::eval: x must be > 0");
    const double damp = std::exp(-std::pow(x, alpha_inv));
    std::vector<double> vals(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        vals[i] = terms[i].coeff * std::pow(x, terms[i].power);
    return compensated_sum(vals) * damp / normalizer;
}

ExpTermSum ExpTermSum::derivative() const {
    ExpTermSum d;
    d.alpha_inv = alpha_inv;
    d.normalizer = normalizer;
    std::map<double, double> merged;
    for (const Term& t : terms) {
        if (t.power != 0.0) merged[t.power - 1.0] += t.coeff * t.power;
        merged[t.power + alpha_inv - 1.0] -= t.coeff * alpha_inv;
    }
    d.terms.reserve(merged.size());
    for (const auto& [p, c] : merged)
        if (c != 0.0) d.terms.push_back({c, p});
    return d;
}

ExpTermSum gauss_laguerre_weight_termsum(double alpha, double b) {
    ExpTermSum e;
    e.alpha_inv = 1.0 / alpha;
    e.terms.push_back({1.0, b + 1.0 / alpha - 1.0});
    return e;
}

namespace {

// Rodrigues evaluation on the exact power lattice {i + k/alpha}.  Every path
// to a fixed (i, k) cell carries the same sign (-1)^k, so the merged
// coefficients accumulate without cancellation.
struct LatticeSum {
    double inv_alpha;
    double base_power;                       // common offset of all powers
    std::map<std::pair<int, int>, double> coeff;  // (i, k) -> coefficient

    void differentiate() {
        std::map<std::pair<int, int>, double> next;
        for (const auto& [key, c] : coeff) {
            const auto [i, k] = key;
            const double power = base_power + i + k * inv_alpha;
            if (power != 0.0) next[{i - 1, k}] += c * power;
            next[{i - 1, k + 1}] -= c * inv_alpha;
        }
        coeff = std::move(next);
    }
};

}  // namespace

std::vector<double> gauss_laguerre_coeigen_coeffs(double alpha, double b, int n, int n_max) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("gauss_laguerre_coeigen_v: alpha must be in (0,1)");
    if (!(b >= 1.0 - 1.0 / alpha))
        throw std::invalid_argument("gauss_laguerre_coeigen_v: b must be >= 1 - 1/alpha");
    if (n < 0 || n > n_max)
        throw std::out_of_range("gauss_laguerre_coeigen_v: n exceeds n_max");
    if (n == 0) return {1.0};

    LatticeSum f;
    f.inv_alpha = 1.0 / alpha;
    f.base_power = b + 1.0 / alpha - 1.0;  // the weight's own power
    f.coeff[{n, 0}] = 1.0;                 // x^n * weight
    for (int j = 0; j < n; ++j) f.differentiate();

    // After n derivatives every surviving cell sits at i = 0, so dividing by
    // n! * weight leaves a polynomial in x^{1/alpha} of degree n.
    std::vector<double> coeffs(n + 1, 0.0);
    const double inv_nfact = std::exp(-std::lgamma(n + 1.0));
    for (const auto& [key, c] : f.coeff) {
        const auto [i, k] = key;
        if (i != 0 || k < 0 || k > n)
            throw std::logic_error("gauss_laguerre_coeigen_v: lattice invariant violated");
        coeffs[k] = c * inv_nfact;
    }
    return coeffs;
}

double gauss_laguerre_coeigen_v(double alpha, double b, int n, double x, int n_max) {
    if (!(x > 0.0))
        throw std::invalid_argument("gauss_laguerre_coeigen_v: x must be > 0");
    const std::vector<double> coeffs = gauss_laguerre_coeigen_coeffs(alpha, b, n, n_max);
    const double y = std::pow(x, 1.0 / alpha);
    std::vector<double> vals(coeffs.size());
    double yk = 1.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        vals[k] = coeffs[k] * yk;
        yk *= y;
    }
    return compensated_sum(vals);
}

}  // namespace spcorr
