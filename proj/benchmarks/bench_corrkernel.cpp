#include <benchmark/benchmark.h>

#include "spcorr/corrkernel.hpp"

using namespace spcorr;

static void MarkovCorr(benchmark::State& state) {
    const auto sys = EigenSystem::Classical(1.0, 30);
    const CorrelationQuery q{2, 2, 3.0, 1.0, Pairing::PV, Regime::markov};
    markov_corr(sys, q);  // warm the kappa cache
    for (auto _ : state) benchmark::DoNotOptimize(markov_corr(sys, q));
}
BENCHMARK(MarkovCorr);

static void InverseBracketStable(benchmark::State& state) {
    const auto spec = SubordinatorSpec::Stable(0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(inverse_time_change_bracket(spec, 1.0, 5.0, 1.0));
}
BENCHMARK(InverseBracketStable)->Unit(benchmark::kMicrosecond);

static void InverseBracketPoisson(benchmark::State& state) {
    const auto spec = SubordinatorSpec::Poisson(2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(inverse_time_change_bracket(spec, 1.0, 5.0, 1.0));
}
BENCHMARK(InverseBracketPoisson);

static void ConditionNumberSmallPert(benchmark::State& state) {
    for (auto _ : state) {
        const auto sys = EigenSystem::SmallPert(2.0, 30);  // fresh cache each round
        benchmark::DoNotOptimize(condition_number(sys, 10));
    }
}
BENCHMARK(ConditionNumberSmallPert)->Unit(benchmark::kMillisecond);
