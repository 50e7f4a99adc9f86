#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spcorr {

/// Degree and order of an associated Laguerre polynomial L_n^{(beta)}.
struct LaguerreParams {
    int n = 0;         ///< degree, >= 0
    double beta = 0.0; ///< order, > -1
};

/// L_n^{(beta)}(x) by the stable three-term recurrence.
double laguerre(const LaguerreParams& p, double x);

/// sqrt(c_n(beta)) * L_n^{(beta)}(x) with
/// c_n(beta) = Gamma(n+1)Gamma(beta+1)/Gamma(n+beta+1); the family is
/// orthonormal in L^2 of the normalized Gamma(beta+1) law.
double laguerre_normalized(const LaguerreParams& p, double x);

/// c_n(beta), evaluated in log-Gamma space.
double laguerre_norm_constant(int n, double beta);

/// Mittag-Leffler function E_alpha(z) on alpha in (0,1], z <= 0.
/// Absolute accuracy ~1e-12 over the supported domain.
double mittag_leffler(double alpha, double z);

/// Coefficient table for the polynomial eigenfunctions
/// P_n(x) = sum_k (-1)^k C(n,k) x^k / W_phi(k+1), where W_phi(1) = 1 and
/// W_phi(k+1) = phi(1)...phi(k) for a Bernstein function phi.
struct GLCoefficients {
    std::vector<double> wphi_log; ///< wphi_log[k] = log W_phi(k+1); wphi_log[0] = 0
    std::string family;

    int max_degree() const { return static_cast<int>(wphi_log.size()) - 1; }

    static GLCoefficients from_phi(const std::function<double(double)>& phi, int n_max,
                                   std::string family_tag);
    /// phi(k) = k, i.e. W_phi(k+1) = k!; reproduces L_n^{(0)}.
    static GLCoefficients classical(int n_max);
    /// W_phi(k+1) = Gamma(alpha k + alpha b + 1) / Gamma(alpha b + 1).
    static GLCoefficients gauss_laguerre(double alpha, double b, int n_max);
};

/// Evaluate the alternating coefficient sum for degree n at x >= 0.
/// Terms are formed in log space and combined with compensated summation;
/// relative accuracy degrades past n ~ 30 in double precision.
double gl_eigen_p(const GLCoefficients& coeffs, int n, double x);

/// Eigenfunctions P_n^{(b)} of the perturbed Laguerre semigroup (b >= 1):
/// c_n(b+1) L_n^{(b+1)}(x) - (c_n(b+1)/b) x L_{n-1}^{(b+2)}(x),
/// with L_{-1} == 0 for n = 0.
double smallpert_eigen_p(double b, int n, double x);

/// Co-eigenfunctions V_n^{(b)}(x) = L_n^{(b-1)}(x)/(x+1) + x L_n^{(b)}(x)/(x+1).
double smallpert_coeigen_v(double b, int n, double x);

/// Closed term algebra for f(x) = sum_i c_i x^{a_i} exp(-x^{1/alpha}) / normalizer.
/// Differentiation stays inside the algebra:
///   d/dx [x^a e^{-x^{1/alpha}}] = a x^{a-1} e^{-x^{1/alpha}}
///                                 - (1/alpha) x^{a+1/alpha-1} e^{-x^{1/alpha}}.
struct ExpTermSum {
    struct Term {
        double coeff;
        double power;
    };
    double alpha_inv = 1.0; ///< the exponent 1/alpha
    std::vector<Term> terms;
    double normalizer = 1.0;

    double eval(double x) const;
    ExpTermSum derivative() const;
};

/// The invariant density weight x^{b+1/alpha-1} exp(-x^{1/alpha}) as a term sum
/// (normalizer left at 1; it cancels wherever the algebra is used).
ExpTermSum gauss_laguerre_weight_termsum(double alpha, double b);

/// Co-eigenfunction V_n^{(alpha,b)}(x) = (x^n e_{alpha,b}(x))^{(n)} / (n! e_{alpha,b}(x)),
/// computed exactly in the term algebra. Requires x > 0 and n <= n_max.
/// The pair (P_n^{(alpha,b)}, V_n^{(alpha,b)}) is biorthonormal in
/// L^2(e_{alpha,b}); see gl_eigen_p with the gauss_laguerre table.
double gauss_laguerre_coeigen_v(double alpha, double b, int n, double x, int n_max = 12);

/// The same co-eigenfunction as a polynomial in x^{1/alpha}:
/// V_n^{(alpha,b)}(x) = sum_{k=0}^{n} coeffs[k] x^{k/alpha}. The returned
/// coefficients alternate in sign ((-1)^k) and are exact up to roundoff.
std::vector<double> gauss_laguerre_coeigen_coeffs(double alpha, double b, int n,
                                                  int n_max = 12);

/// Compensated (Neumaier) summation of a term sequence.
double compensated_sum(const std::vector<double>& terms);

}  // namespace spcorr
