#include "spcorr/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "spcorr/errors.hpp"
#include "spcorr/quadrature.hpp"

namespace spcorr {

DensityMeasure DensityMeasure::GammaBeta(double beta) {
    if (!(beta > -1.0)) throw std::invalid_argument("GammaBeta: beta must be > -1");
    DensityMeasure m;
    m.family = MeasureFamily::gamma_beta;
    m.beta = beta;
    return m;
}

DensityMeasure DensityMeasure::NuB(double b) {
    if (!(b >= 1.0)) throw std::invalid_argument("NuB: b must be >= 1");
    DensityMeasure m;
    m.family = MeasureFamily::nu_b;
    m.b = b;
    return m;
}

DensityMeasure DensityMeasure::EAlphaB(double alpha, double b) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("EAlphaB: alpha in (0,1)");
    if (!(b >= 1.0 - 1.0 / alpha))
        throw std::invalid_argument("EAlphaB: b must be >= 1 - 1/alpha");
    DensityMeasure m;
    m.family = MeasureFamily::e_alpha_b;
    m.alpha = alpha;
    m.b = b;
    return m;
}

double DensityMeasure::density(double x) const {
    if (!(x > 0.0)) return 0.0;
    switch (family) {
        case MeasureFamily::gamma_beta:
            return std::exp(beta * std::log(x) - x - std::lgamma(beta + 1.0));
        case MeasureFamily::nu_b:
            return (1.0 + x) / (b + 1.0) *
                   std::exp((b - 1.0) * std::log(x) - x - std::lgamma(b));
        case MeasureFamily::e_alpha_b: {
            // Probability normalization: X = G^alpha, G ~ Gamma(alpha b + 1),
            // so the normalizer carries the Jacobian factor alpha.
            const double ia = 1.0 / alpha;
            return std::exp((b + ia - 1.0) * std::log(x) - std::pow(x, ia) -
                            std::lgamma(alpha * b + 1.0)) /
                   alpha;
        }
        case MeasureFamily::custom:
            return custom_density ? custom_density(x) : 0.0;
    }
    return 0.0;
}

double DensityMeasure::mean() const {
    switch (family) {
        case MeasureFamily::gamma_beta:
            return beta + 1.0;
        case MeasureFamily::nu_b:
            // (E[X] + E[X^2])/(b+1) under gamma_{b-1}: (b + b(b+1))/(b+1)
            return (b + b * (b + 1.0)) / (b + 1.0);
        case MeasureFamily::e_alpha_b:
            // E[G^alpha], G ~ Gamma(alpha b + 1)
            return std::exp(std::lgamma(alpha * b + 1.0 + alpha) -
                            std::lgamma(alpha * b + 1.0));
        case MeasureFamily::custom:
            throw std::invalid_argument("DensityMeasure::mean: unknown for custom family");
    }
    return 0.0;
}

std::string DensityMeasure::name() const {
    switch (family) {
        case MeasureFamily::gamma_beta:
            return "gamma_beta(" + std::to_string(beta) + ")";
        case MeasureFamily::nu_b:
            return "nu_b(" + std::to_string(b) + ")";
        case MeasureFamily::e_alpha_b:
            return "e_alpha_b(" + std::to_string(alpha) + "," + std::to_string(b) + ")";
        case MeasureFamily::custom:
            return "custom";
    }
    return "?";
}

QuadratureRule make_rule(const DensityMeasure& mu, int order) {
    QuadratureRule rule;
    rule.order = order;
    switch (mu.family) {
        case MeasureFamily::gamma_beta: {
            const GammaRule& g = gamma_rule(mu.beta, order);
            rule.nodes = g.nodes;
            rule.weights = g.weights;
            rule.kind = "gauss_gamma";
            break;
        }
        case MeasureFamily::nu_b: {
            // gamma_{b-1} rule reweighted by (1+x)/(b+1).
            const GammaRule& g = gamma_rule(mu.b - 1.0, order);
            rule.nodes = g.nodes;
            rule.weights.resize(g.nodes.size());
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                rule.weights[i] = g.weights[i] * (1.0 + g.nodes[i]) / (mu.b + 1.0);
            rule.kind = "gauss_gamma_reweighted";
            break;
        }
        case MeasureFamily::e_alpha_b: {
            // Substituting y = x^{1/alpha} turns the integral into a
            // normalized Gamma(alpha b) weight in y; nodes map back as y^alpha.
            const GammaRule& g = gamma_rule(mu.alpha * mu.b, order);
            rule.nodes.resize(g.nodes.size());
            rule.weights = g.weights;
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                rule.nodes[i] = std::pow(g.nodes[i], mu.alpha);
            rule.kind = "gauss_gamma_substituted";
            break;
        }
        case MeasureFamily::custom: {
            if (!mu.custom_density)
                throw std::invalid_argument("make_rule: custom measure without density");
            const GammaRule& g = gamma_rule(mu.custom_weight_beta, order);
            rule.nodes = g.nodes;
            rule.weights.resize(g.nodes.size());
            const double lg = std::lgamma(mu.custom_weight_beta + 1.0);
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                const double x = g.nodes[i];
                const double target = mu.custom_density(x);
                // Ratio in log space; far-tail nodes where either density
                // underflows contribute honest zeros instead of inf/NaN.
                const double log_base = mu.custom_weight_beta * std::log(x) - x - lg;
                const double w =
                    target > 0.0 && g.weights[i] > 0.0
                        ? std::exp(std::log(g.weights[i]) + std::log(target) - log_base)
                        : 0.0;
                rule.weights[i] = std::isfinite(w) ? w : 0.0;
            }
            rule.kind = "gauss_gamma_ratio";
            break;
        }
    }
    return rule;
}

namespace {

double apply_rule(const QuadratureRule& rule, const std::function<double(double)>& f) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (rule.weights[i] == 0.0) continue;  // underflowed tail weight
        const double t = rule.weights[i] * f(rule.nodes[i]);
        const double next = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - next) + t;
        else
            comp += (t - next) + sum;
        sum = next;
    }
    return sum + comp;
}

}  // namespace

IntegralResult inner_product(const std::function<double(double)>& f,
                             const std::function<double(double)>& g,
                             const DensityMeasure& mu, double tol) {
    auto fg = [&](double x) { return f(x) * g(x); };
    return integrate(fg, mu, tol);
}

IntegralResult integrate(const std::function<double(double)>& f, const DensityMeasure& mu,
                         double tol) {
    double prev = apply_rule(make_rule(mu, kQuadratureBaseOrder), f);
    int order = kQuadratureBaseOrder;
    double err = 0.0;
    while (order < kQuadratureMaxOrder) {
        order *= 2;
        const double cur = apply_rule(make_rule(mu, order), f);
        err = std::abs(cur - prev);
        prev = cur;
        // Absolute for O(1) integrals, proportional beyond (large-norm
        // integrands bottom out at roundoff relative to their magnitude).
        if (err <= tol * (1.0 + std::abs(cur))) return {cur, err, order};
    }
    throw QuadratureError("integrate: refinement stalled at order " + std::to_string(order) +
                          " with error estimate " + std::to_string(err) + " > tol");
}

std::vector<double> sample_stationary(const DensityMeasure& mu, std::size_t count,
                                      std::uint64_t seed) {
    std::vector<double> out(count);
    Rng rng = Rng::substream(seed, 0x6d656173ULL);
    switch (mu.family) {
        case MeasureFamily::gamma_beta:
            for (auto& x : out) x = rng.gamma(mu.beta + 1.0);
            break;
        case MeasureFamily::nu_b:
            // nu_b = (1/(b+1)) gamma_{b-1} + (b/(b+1)) gamma_b
            for (auto& x : out) {
                const double shape = rng.uniform() < 1.0 / (mu.b + 1.0) ? mu.b : mu.b + 1.0;
                x = rng.gamma(shape);
            }
            break;
        case MeasureFamily::e_alpha_b:
            for (auto& x : out) x = std::pow(rng.gamma(mu.alpha * mu.b + 1.0), mu.alpha);
            break;
        case MeasureFamily::custom:
            if (!mu.custom_sampler)
                throw std::invalid_argument(
                    "sample_stationary: custom family without a sampler");
            for (auto& x : out) x = mu.custom_sampler(rng);
            break;
    }
    return out;
}

}  // namespace spcorr
