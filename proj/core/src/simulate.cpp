#include "spcorr/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spcorr/inference.hpp"
#include "spcorr/rng.hpp"

namespace spcorr {

namespace {

void check_config(const SimConfig& config) {
    if (config.paths < 1) throw std::invalid_argument("simulate: paths must be >= 1");
    if (config.grid.empty()) throw std::invalid_argument("simulate: empty time grid");
    if (!(config.beta > 0.0)) throw std::invalid_argument("simulate: beta must be > 0");
    if (!(config.sigma2 > 0.0)) throw std::invalid_argument("simulate: sigma2 must be > 0");
    if (!std::is_sorted(config.grid.begin(), config.grid.end()))
        throw std::invalid_argument("simulate: grid must be sorted");
    if (config.grid.front() < 0.0)
        throw std::invalid_argument("simulate: grid times must be >= 0");
}

// Runs one path-worker per thread over contiguous path ranges. The per-path
// generator is derived from (seed, path), so the partition does not matter.
template <typename PathFn>
SamplePathSet run_paths(const SimConfig& config, PathFn&& fn) {
    SamplePathSet set;
    set.grid = config.grid;
    set.paths = config.paths;
    set.config = config;
    set.values.resize(config.paths * config.grid.size());

    unsigned hw = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                     : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers = std::min<std::size_t>(hw, config.paths);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (config.paths + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(config.paths, lo + chunk);
        pool.emplace_back([&, lo, hi]() {
            const std::size_t width = config.grid.size();
            for (std::size_t p = lo; p < hi; ++p) {
                Rng rng = Rng::substream(config.seed, p);
                fn(rng, p, &set.values[p * width]);
            }
        });
    }
    for (auto& th : pool) th.join();
    return set;
}

}  // namespace

double cir_transition(Rng& rng, double x, double tau, double beta, double sigma2) {
    if (tau <= 0.0) return x;
    const double e = std::exp(-tau);
    const double one_minus_e = -std::expm1(-tau);
    const double c = sigma2 * one_minus_e / 2.0;
    const double dof = 2.0 * (beta + sigma2) / sigma2;
    const double nc = 2.0 * x * e / (sigma2 * one_minus_e);
    // chi'^2(dof, nc) = chi^2(dof - 1) + (Z + sqrt(nc))^2, valid for dof > 1
    const double z = rng.normal() + std::sqrt(nc);
    const double body = 2.0 * rng.gamma((dof - 1.0) / 2.0);
    return c * (body + z * z);
}

SamplePathSet simulate_cir_stationary(const SimConfig& config) {
    check_config(config);
    return run_paths(config, [&](Rng& rng, std::size_t, double* row) {
        double x = rng.gamma(config.beta + 1.0);  // gamma_beta start
        double prev_t = config.grid.front();
        // The marginal at the first grid time is already stationary.
        row[0] = x;
        for (std::size_t i = 1; i < config.grid.size(); ++i) {
            x = cir_transition(rng, x, config.grid[i] - prev_t, config.beta, config.sigma2);
            prev_t = config.grid[i];
            row[i] = x;
        }
    });
}

SamplePathSet simulate_bochner(const SimConfig& config, const SubordinatorSpec& spec) {
    check_config(config);
    const SubordinatorSampler sampler(spec);
    return run_paths(config, [&](Rng& rng, std::size_t, double* row) {
        double x = rng.gamma(config.beta + 1.0);
        row[0] = x;
        for (std::size_t i = 1; i < config.grid.size(); ++i) {
            const double op_time = sampler.increment(config.grid[i] - config.grid[i - 1], rng);
            x = cir_transition(rng, x, op_time, config.beta, config.sigma2);
            row[i] = x;
        }
    });
}

SamplePathSet simulate_inverse_tc(const SimConfig& config, const SubordinatorSpec& spec) {
    check_config(config);
    if (config.grid.front() <= 0.0)
        throw std::invalid_argument("simulate_inverse_tc: grid times must be > 0");
    const double dt = config.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_inverse_tc: dt must be > 0");

    const SubordinatorSampler sampler(spec);
    SamplePathSet result;
    std::vector<double> all_op(config.paths * config.grid.size());
    result = run_paths(config, [&](Rng& rng, std::size_t path, double* row) {
        const std::size_t width = config.grid.size();
        std::vector<double> L(width);
        if (spec.kind == SubordinatorSpec::Kind::poisson) {
            // L_t is exactly the arrival time of jump floor(t)+1.
            double arrival = 0.0;
            long long count = 0;
            for (std::size_t i = 0; i < width; ++i) {
                const long long need = static_cast<long long>(std::floor(config.grid[i])) + 1;
                while (count < need) {
                    arrival += rng.exponential(spec.theta);
                    ++count;
                }
                L[i] = arrival;
            }
        } else {
            // Fine-step first passage; L carries an upward bias < dt.
            double s = 0.0, level = 0.0;
            for (std::size_t i = 0; i < width; ++i) {
                const double target = config.grid[i];
                while (level <= target) {
                    s += dt;
                    level += sampler.increment(dt, rng);
                }
                L[i] = s;
            }
        }
        double x = rng.gamma(config.beta + 1.0);  // X at operational time 0
        double prev = 0.0;
        for (std::size_t i = 0; i < width; ++i) {
            x = cir_transition(rng, x, L[i] - prev, config.beta, config.sigma2);
            prev = L[i];
            row[i] = x;
            all_op[path * width + i] = L[i];
        }
    });
    result.op_times = std::move(all_op);
    return result;
}

LagCorrelation empirical_lag_corr(const SamplePathSet& set,
                                  const std::function<double(double)>& f,
                                  const std::function<double(double)>& g, std::size_t i,
                                  std::size_t j, std::size_t block) {
    if (i >= set.grid.size() || j >= set.grid.size())
        throw std::out_of_range("empirical_lag_corr: grid index out of range");
    std::vector<double> xs(set.paths), ys(set.paths);
    for (std::size_t p = 0; p < set.paths; ++p) {
        xs[p] = f(set.at(p, i));
        ys[p] = g(set.at(p, j));
    }
    const EstimationResult r = empirical_corr(xs, ys, block);
    LagCorrelation lc;
    lc.estimate = r.estimate;
    lc.se = r.se;
    lc.paths = set.paths;
    lc.i = i;
    lc.j = j;
    return lc;
}

}  // namespace spcorr
