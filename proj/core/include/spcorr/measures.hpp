#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spcorr/rng.hpp"

namespace spcorr {

enum class MeasureFamily { gamma_beta, nu_b, e_alpha_b, custom };

/// A probability density on (0, inf).
///
/// The three named families are the stationary laws of the worked examples:
///   gamma_beta:  x^beta e^{-x} / Gamma(beta+1)
///   nu_b:        ((1+x)/(b+1)) gamma_{b-1}(dx)
///   e_alpha_b:   x^{b+1/alpha-1} e^{-x^{1/alpha}} / (alpha Gamma(alpha b + 1)),
/// i.e. the law of G^alpha with G ~ Gamma(alpha b + 1).
struct DensityMeasure {
    MeasureFamily family = MeasureFamily::gamma_beta;
    double beta = 0.0;   ///< gamma_beta
    double b = 0.0;      ///< nu_b
    double alpha = 0.0;  ///< e_alpha_b (paired with b)

    std::function<double(double)> custom_density;
    double custom_weight_beta = 0.0;  ///< Gamma exponent of the base rule for custom
    std::function<double(Rng&)> custom_sampler;

    double density(double x) const;
    double mean() const;
    std::string name() const;

    static DensityMeasure GammaBeta(double beta);
    static DensityMeasure NuB(double b);
    static DensityMeasure EAlphaB(double alpha, double b);
};

/// Quadrature rule in the measure's own coordinates: integral f dmu ~= sum w_i f(x_i).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::string kind;
    int order = 0;
};

QuadratureRule make_rule(const DensityMeasure& mu, int order);

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  ///< refinement-based estimate
    int order = 0;       ///< order of the accepted rule
};

inline constexpr int kQuadratureBaseOrder = 200;
inline constexpr int kQuadratureMaxOrder = 1600;

/// <f, g>_mu with the error estimated from rule doubling. Throws
/// QuadratureError if the estimate still exceeds `tol` at the maximum order.
IntegralResult inner_product(const std::function<double(double)>& f,
                             const std::function<double(double)>& g,
                             const DensityMeasure& mu, double tol = 1e-9);

/// integral f dmu, same refinement contract.
IntegralResult integrate(const std::function<double(double)>& f, const DensityMeasure& mu,
                         double tol = 1e-9);

/// i.i.d. draws from mu. Deterministic in the seed.
std::vector<double> sample_stationary(const DensityMeasure& mu, std::size_t count,
                                      std::uint64_t seed);

}  // namespace spcorr
