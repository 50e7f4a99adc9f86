#pragma once

#include <functional>
#include <vector>

namespace spcorr {

/// Nodes and weights for the normalized Gamma weight
///   int_0^inf f(y) y^beta e^{-y} dy / Gamma(beta+1)  ~=  sum_i w_i f(y_i),
/// exact for polynomials of degree <= 2*order - 1. Built by Golub-Welsch on
/// the generalized Laguerre Jacobi matrix; rules are cached per (beta, order).
struct GammaRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

const GammaRule& gamma_rule(double beta, int order);

/// Adaptive Gauss-Kronrod integral over [a, b] (finite or infinite endpoints).
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-10, double* err = nullptr);

/// tanh-sinh integral over a finite interval; tolerant of integrable
/// endpoint singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10);

}  // namespace spcorr
