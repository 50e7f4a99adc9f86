#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spcorr {

/// A subordinator, identified by its Bernstein function
///   phi(lam) = drift * lam + int_0^inf (1 - e^{-lam y}) levy(dy).
/// Closed-form kinds: stable (phi = lam^alpha) and poisson
/// (phi = theta (1 - e^{-lam})). Generic kinds carry the drift and the Levy
/// tail function y -> Pi_bar(y) = levy((y, inf)).
struct SubordinatorSpec {
    enum class Kind { stable, poisson, generic };
    Kind kind = Kind::stable;
    double alpha = 0.5;  ///< stable index, in (0,1)
    double theta = 1.0;  ///< poisson rate, > 0
    double drift = 0.0;  ///< generic
    std::function<double(double)> levy_tail;  ///< generic; empty = pure drift

    static SubordinatorSpec Stable(double alpha);
    static SubordinatorSpec Poisson(double theta);
    static SubordinatorSpec Generic(double drift,
                                    std::function<double(double)> levy_tail = {});

    /// Parses "stable:0.5", "poisson:2.0", "drift:1.0".
    static SubordinatorSpec parse(const std::string& text);
    std::string to_string() const;

    /// Numerical check of int (1 ^ y) levy(dy) < inf for the generic kind
    /// (equivalently, int_0^1 Pi_bar converges). Throws on failure.
    void validate() const;
};

/// phi(lam); nonnegative, nondecreasing, concave, phi(0) = 0.
double laplace_exponent(const SubordinatorSpec& spec, double lam);

/// Laplace transform eta_t(lam) = E[e^{-lam L_t}] of the inverse subordinator.
/// Closed forms: stable -> E_alpha(-lam t^alpha); poisson ->
/// (1 + lam/theta)^{-floor(t+1)}. Generic kinds invert
/// L_{eta_.(lam)}(q) = phi(q) / (q (lam + phi(q))) by Gaver-Stehfest;
/// the numeric value is clamped into (0, 1].
/// eta_0(lam) = 1 for a.s.-increasing subordinators (phi(inf) = inf); for
/// finite activity without drift L_0 is the first arrival time, e.g.
/// poisson: eta_0 = theta/(theta+lam).
struct EtaTransform {
    enum class Strategy { closed_form, laplace_inversion };
    SubordinatorSpec spec;
    Strategy strategy = Strategy::closed_form;

    explicit EtaTransform(SubordinatorSpec s);
    double operator()(double t, double lam) const;
};

double eta(const SubordinatorSpec& spec, double t, double lam);

/// Renewal (potential) measure U(dr) of the subordinator,
/// U(B) = int_0^inf P(T_t in B) dt, with Laplace transform 1/phi.
struct RenewalMeasure {
    enum class Representation { density, lattice, numeric };
    SubordinatorSpec spec;
    Representation representation = Representation::density;

    explicit RenewalMeasure(SubordinatorSpec s);

    /// int_{[0, s]} g(r) U(dr).
    double integrate(double s, const std::function<double(double)>& g,
                     double tol = 1e-8) const;
    /// E[L_s] = U(0, s).
    double mean_inverse(double s) const;
};

double renewal_integral(const SubordinatorSpec& spec, double s,
                        const std::function<double(double)>& g, double tol = 1e-8);
double mean_inverse(const SubordinatorSpec& spec, double s);

struct LongTailDiagnostics {
    bool long_tailed = false;
    double index = 0.0;
    double fit_residual = 0.0;
};

/// Sufficient condition: phi strongly regularly varying at 0 with index in
/// (0,1). Estimated from the slope of log phi(q) over q in [1e-6, 1e-3].
LongTailDiagnostics is_long_tailed(const SubordinatorSpec& spec);

class Rng;

/// Draws subordinator increments T_{t+dt} - T_t. Exact for the stable and
/// poisson kinds (self-similar scaling of a Kanter variate; Poisson counts).
/// The generic kind uses a compound-Poisson approximation: jumps above a
/// truncation eps arrive at rate Pi_bar(eps), the mass below eps is folded
/// into the drift. The truncation pieces are precomputed at construction.
class SubordinatorSampler {
public:
    explicit SubordinatorSampler(SubordinatorSpec spec, double truncation_eps = 1e-4);
    double increment(double dt, Rng& rng) const;
    const SubordinatorSpec& spec() const { return spec_; }

private:
    SubordinatorSpec spec_;
    double cp_eps_ = 0.0;
    double cp_rate_ = 0.0;
    double cp_drift_ = 0.0;
    double draw_jump(Rng& rng) const;
};

/// One realized subordinator trajectory on a uniform grid {0, dt, 2 dt, ...}.
struct SubordinatorPath {
    double dt = 0.0;
    std::vector<double> values;  ///< T at k * dt, values[0] = 0
};

SubordinatorPath sample_path(const SubordinatorSpec& spec, double horizon, double dt,
                             std::uint64_t seed);

/// One draw of L_t = inf{s > 0 : T_s > t}. Stable uses the exact identity
/// L_t = (t / T_1)^alpha in law; poisson the exact Gamma(floor(t)+1, 1/theta)
/// passage time; generic a fine-step first passage that auto-extends.
double sample_inverse_at(const SubordinatorSpec& spec, double t, std::uint64_t seed);

/// Gaver-Stehfest inversion of F at t > 0 (real-axis evaluations only).
/// n_terms must be even; 14 is the double-precision sweet spot. The
/// Richardson-style check compares n_terms with n_terms - 2 and throws
/// InversionError when the two disagree wildly.
double gaver_stehfest(const std::function<double(double)>& F, double t, int n_terms = 14);

}  // namespace spcorr
