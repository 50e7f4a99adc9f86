#include <benchmark/benchmark.h>

#include "spcorr/measures.hpp"
#include "spcorr/specfun.hpp"

using namespace spcorr;

static void MittagLefflerSeries(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler(0.6, -0.8));
}
BENCHMARK(MittagLefflerSeries);

static void MittagLefflerIntegral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler(0.6, -12.0));
}
BENCHMARK(MittagLefflerIntegral);

static void MittagLefflerAsymptotic(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler(0.6, -300.0));
}
BENCHMARK(MittagLefflerAsymptotic);

static void LaguerreRecurrence(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(laguerre({n, 1.5}, 3.7));
}
BENCHMARK(LaguerreRecurrence)->Arg(5)->Arg(20);

static void RodriguesCoeigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gauss_laguerre_coeigen_v(0.6, 1.0, n, 2.0, 20));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(RodriguesCoeigen)->Arg(4)->Arg(8)->Arg(16);

static void GammaRuleConstruction(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    long counter = 0;
    for (auto _ : state) {
        // bypass the cache by varying beta slightly
        const double beta = 1.0 + 1e-9 * static_cast<double>(++counter);
        benchmark::DoNotOptimize(make_rule(DensityMeasure::GammaBeta(beta), order));
    }
}
BENCHMARK(GammaRuleConstruction)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
