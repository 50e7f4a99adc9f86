#include <benchmark/benchmark.h>

#include "spcorr/rng.hpp"
#include "spcorr/simulate.hpp"

using namespace spcorr;

static void KanterDraw(benchmark::State& state) {
    Rng rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(rng.stable_positive(0.5));
}
BENCHMARK(KanterDraw);

static void CirTransition(benchmark::State& state) {
    Rng rng(7);
    double x = 2.0;
    for (auto _ : state) {
        x = cir_transition(rng, x, 1.0, 1.0);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(CirTransition);

static void SimulateMarkovEnsemble(benchmark::State& state) {
    SimConfig cfg;
    cfg.paths = static_cast<std::size_t>(state.range(0));
    cfg.seed = 3;
    cfg.grid = {0.0, 1.0, 2.0};
    cfg.beta = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cir_stationary(cfg));
    state.SetItemsProcessed(state.iterations() * cfg.paths);
}
BENCHMARK(SimulateMarkovEnsemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void SimulateInverseStableEnsemble(benchmark::State& state) {
    SimConfig cfg;
    cfg.paths = static_cast<std::size_t>(state.range(0));
    cfg.seed = 3;
    cfg.grid = {1.0, 2.0};
    cfg.beta = 1.0;
    cfg.dt = 1e-2;
    const auto spec = SubordinatorSpec::Stable(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_inverse_tc(cfg, spec));
    state.SetItemsProcessed(state.iterations() * cfg.paths);
}
BENCHMARK(SimulateInverseStableEnsemble)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
