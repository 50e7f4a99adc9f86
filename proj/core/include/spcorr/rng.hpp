#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace spcorr {

/// Deterministic random source.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the
/// standard) and all distribution transforms are implemented here, so a
/// given seed produces the same draws on every platform and toolchain.
/// Parallel consumers derive independent substreams from (master seed,
/// stream index); results then never depend on thread scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng substream(std::uint64_t master, std::uint64_t index) {
        return Rng(mix(master ^ mix(index)));
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate = 1.0) { return -std::log(uniform_pos()) / rate; }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through
    /// Gamma(shape + 1) * U^{1/shape}.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("Rng::gamma: shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Poisson(mean), exact. Inversion by uniform products on chunks of
    /// mean <= 30 so the running product never underflows.
    long long poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("Rng::poisson: mean must be >= 0");
        long long total = 0;
        while (mean > 0.0) {
            const double mu = mean > 30.0 ? 30.0 : mean;
            mean -= mu;
            const double limit = std::exp(-mu);
            double prod = uniform_pos();
            while (prod > limit) {
                prod *= uniform_pos();
                ++total;
            }
        }
        return total;
    }

    /// Positive alpha-stable variate S with E[exp(-lam S)] = exp(-lam^alpha),
    /// 0 < alpha < 1, by Kanter's representation.
    double stable_positive(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("Rng::stable_positive: alpha must be in (0,1)");
        constexpr double kPi = 3.14159265358979323846;
        double u = uniform();
        if (u < 1e-16) u = 1e-16;
        if (u > 1.0 - 1e-16) u = 1.0 - 1e-16;
        const double e = exponential();
        const double ratio = (1.0 - alpha) / alpha;
        const double a = std::pow(std::sin(alpha * kPi * u), 1.0 / ratio) *
                         std::sin((1.0 - alpha) * kPi * u) /
                         std::pow(std::sin(kPi * u), 1.0 + 1.0 / ratio);
        return std::pow(a / e, ratio);
    }

private:
    std::mt19937_64 eng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace spcorr
