#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spcorr/subordinate.hpp"

namespace spcorr {

enum class TimeChangeKind { identity, bochner, inverse };

struct SimConfig {
    std::size_t paths = 1;
    std::uint64_t seed = 0;
    std::vector<double> grid;          ///< sorted, nonnegative observation times
    TimeChangeKind regime = TimeChangeKind::identity;
    double beta = 1.0;                 ///< CIR parameter, > 0
    double sigma2 = 1.0;               ///< diffusion coefficient of the generator
    double dt = 1e-3;                  ///< first-passage resolution (inverse regime)
    int threads = 0;                   ///< 0 = hardware concurrency
};

/// Seeded ensemble of trajectories observed on the config grid.
/// Values depend only on (seed, path index), never on the thread count.
struct SamplePathSet {
    std::vector<double> grid;
    std::size_t paths = 0;
    std::vector<double> values;  ///< row-major, paths x grid.size()
    /// Operational clock readings L_{t_i} per path (inverse regime only);
    /// nondecreasing along each path.
    std::vector<double> op_times;
    SimConfig config;

    double at(std::size_t path, std::size_t i) const { return values[path * grid.size() + i]; }
    double op_time_at(std::size_t path, std::size_t i) const {
        return op_times[path * grid.size() + i];
    }
};

/// Exact one-step CIR transition X_{t+tau} | X_t = x for the generator
/// sigma2 x f'' + (beta + sigma2 - x) f', sampled from the noncentral
/// chi-squared law via the chi^2_{d-1} + (Z + sqrt(nc))^2 decomposition.
double cir_transition(Rng& rng, double x, double tau, double beta, double sigma2 = 1.0);

/// Stationary ensemble of the diffusion itself: X_{t_i}, X_0 ~ gamma_beta.
SamplePathSet simulate_cir_stationary(const SimConfig& config);

/// Bochner regime: X_{T_{t_i}} with exact subordinator increments between
/// grid times (stable and poisson kinds) or the compound-Poisson
/// approximation (generic).
SamplePathSet simulate_bochner(const SimConfig& config, const SubordinatorSpec& spec);

/// Inverse regime: X_{L_{t_i}} with L computed per path by first passage of
/// one T trajectory; within a path the L values are nondecreasing, so the
/// CIR transitions chain forward.
SamplePathSet simulate_inverse_tc(const SimConfig& config, const SubordinatorSpec& spec);

struct LagCorrelation {
    double estimate = 0.0;
    double se = 0.0;      ///< block jackknife over path blocks
    std::size_t paths = 0;
    std::size_t i = 0, j = 0;
};

/// Ensemble correlation of f(X_{grid[i]}) vs g(X_{grid[j]}) across paths.
LagCorrelation empirical_lag_corr(const SamplePathSet& set,
                                  const std::function<double(double)>& f,
                                  const std::function<double(double)>& g, std::size_t i,
                                  std::size_t j, std::size_t block = 100);

}  // namespace spcorr
