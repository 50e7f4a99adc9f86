#include "spcorr/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace spcorr {

namespace {

GammaRule build_gamma_rule(double beta, int order) {
    if (!(beta > -1.0)) throw std::invalid_argument("gamma_rule: beta must be > -1");
    if (order < 1) throw std::invalid_argument("gamma_rule: order must be >= 1");

    // Nodes: eigenvalues of the Jacobi matrix of the orthonormal generalized
    // Laguerre family (a_k = 2k+beta+1, b_k = sqrt(k(k+beta))).
    Eigen::VectorXd diag(order), sub(std::max(order - 1, 1));
    for (int k = 0; k < order; ++k) diag(k) = 2.0 * k + beta + 1.0;
    for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(k * (k + beta));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(order - 1), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gamma_rule: eigensolver failed");

    // Weights by the Christoffel sum w_i = 1 / sum_{k<n} p_k(x_i)^2. Unlike
    // the eigenvector route this keeps relative accuracy for the far-tail
    // nodes, whose true weights sit far below double-precision noise; the
    // long double exponent range holds the recurrence growth (p ~ e^{x/2})
    // up to order ~3000, and a final cast turns sub-1e-308 weights into
    // honest zeros.
    GammaRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        const double x = es.eigenvalues()(i);
        rule.nodes[i] = x;
        long double p_prev = 1.0L;
        long double sum = 1.0L;  // p_0^2
        long double p_cur = 0.0L;
        if (order > 1) {
            p_cur = (static_cast<long double>(x) - (beta + 1.0L)) / std::sqrt(1.0L * (1.0L + beta));
            sum += p_cur * p_cur;
            for (int k = 1; k + 1 < order; ++k) {
                const long double bk = std::sqrt(static_cast<long double>(k) * (k + beta));
                const long double bk1 =
                    std::sqrt(static_cast<long double>(k + 1) * (k + 1 + beta));
                const long double p_next =
                    ((x - (2.0L * k + beta + 1.0L)) * p_cur - bk * p_prev) / bk1;
                p_prev = p_cur;
                p_cur = p_next;
                sum += p_cur * p_cur;
            }
        }
        rule.weights[i] = static_cast<double>(1.0L / sum);
    }
    return rule;
}

}  // namespace

const GammaRule& gamma_rule(double beta, int order) {
    static std::map<std::pair<double, int>, GammaRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(beta, order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_gamma_rule(beta, order)).first;
    return it->second;
}

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol, double* err) {
    double e = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, tol, &e);
    if (err) *err = e;
    return v;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, tol);
}

}  // namespace spcorr
