#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spcorr/measures.hpp"

namespace spcorr {

/// A named family {lambda_n, P_n, V_n, nu}: eigenvalues, eigenfunctions,
/// co-eigenfunctions and the stationary measure they live in.
/// Invariants: lambda_0 = 0, eigenvalues distinct (multiplicity 1),
/// <P_n, V_n>_nu = 1 within quadrature tolerance.
class EigenSystem {
public:
    enum class Family { classical, smallpert, gausslag, custom };

    Family family = Family::classical;
    std::string name;
    DensityMeasure measure;
    int n_max = 30;

    double lambda(int n) const { return lambda_(n); }
    double P(int n, double x) const { return eigen_(n, x); }
    double V(int n, double x) const { return coeigen_(n, x); }

    /// Self-adjoint diffusion family: P_n = V_n = normalized Laguerre,
    /// measure gamma_beta, lambda_n = n.
    static EigenSystem Classical(double beta, int n_max = 30);
    /// Perturbed family on nu_b, lambda_n = n.
    static EigenSystem SmallPert(double b, int n_max = 30);
    /// Rodrigues family on e_alpha_b, lambda_n = n.
    static EigenSystem GaussLaguerre(double alpha, double b, int n_max = 12);
    /// User-supplied family; rejects duplicate eigenvalues.
    static EigenSystem Custom(std::string name, DensityMeasure measure,
                              std::function<double(int)> lambda,
                              std::function<double(int, double)> eigen,
                              std::function<double(int, double)> coeigen, int n_max);

    // Write-once caches; concurrent duplicate computation is allowed and
    // idempotent (identical values, last write wins). Entries are keyed with
    // the tolerance they were computed at and recomputed if a tighter one is
    // requested.
    double cached_kappa(int m, double tol) const;
    double cached_cosine(int n, int m, double tol) const;

private:
    std::function<double(int)> lambda_;
    std::function<double(int, double)> eigen_;
    std::function<double(int, double)> coeigen_;

    // Family-exact inner products (closed-form moment sums). When set and
    // returning a value they replace the quadrature route for the system's
    // own eigenfunctions; a nullopt falls back to quadrature (the moment
    // sums cancel catastrophically at large index sums, so the family
    // decides per query). The quadrature route stays available as an
    // independent cross-check.
    std::function<std::optional<double>(int, int)> exact_pp_;
    std::function<std::optional<double>(int, int)> exact_pv_;
    std::function<std::optional<double>(int, int)> exact_vv_;

    struct CacheEntry {
        double value;
        double tol;
    };
    mutable std::map<int, CacheEntry> kappa_cache_;
    mutable std::map<std::pair<int, int>, CacheEntry> cosine_cache_;
    mutable std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();

    friend double condition_number(const EigenSystem&, int, double);
    friend double cosine_angle(const EigenSystem&, int, int, double);
    friend std::vector<std::vector<double>> biorthogonality_check(const EigenSystem&, int,
                                                                  double);
    friend double system_inner_product(const EigenSystem&, char, int, char, int, double);
};

/// <A_n, B_m>_nu where 'P' selects an eigenfunction and 'V' a
/// co-eigenfunction; uses the family-exact algebra when available, the
/// measure quadrature otherwise.
double system_inner_product(const EigenSystem& sys, char a, int n, char b, int m,
                            double tol = 1e-9);

/// kappa_nu(m) = ||P_m|| ||V_m||, the norm of the spectral projection.
/// Always >= 1 by Cauchy-Schwarz; raises if the computed value dips below
/// 1 - 1e-6 (a sign the quadrature or the family definition is broken).
double condition_number(const EigenSystem& sys, int m, double tol = 1e-9);

/// c_nu(n,m) = <P_n, P_m> / (||P_n|| ||P_m||), in [-1, 1].
double cosine_angle(const EigenSystem& sys, int n, int m, double tol = 1e-9);

/// Residuals |<P_n, V_m> - delta_nm| for n, m <= n_max.
std::vector<std::vector<double>> biorthogonality_check(const EigenSystem& sys, int n_max,
                                                       double tol = 1e-9);

/// Default per-family quadrature tolerance: exact-rule families can afford
/// 1e-9; the substituted e_alpha_b rule converges algebraically, so it gets
/// a looser default.
double default_quadrature_tol(const EigenSystem& sys);

}  // namespace spcorr
