// bench_dualseries.cpp: grid-size scaling of the expansion engines and the integrator

#include <benchmark/benchmark.h>

#include "dualseries/dualseries.hpp"

using namespace dualseries;

namespace {

void BM_DualDysonSchwinger(benchmark::State& state) {
    const auto model = make_schwinger_spin(1.0, 0.2, 1.0);
    const TimeGrid grid(0.0, 20.0, static_cast<std::size_t>(state.range(0)));
    ExpansionOptions opts;
    opts.self_check = false;
    for (auto _ : state) benchmark::DoNotOptimize(dual_dyson_expand(model, grid, 2, 1.0, opts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DualDysonSchwinger)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_DysonJaynesCummings(benchmark::State& state) {
    const auto model = make_jaynes_cummings(0.1, 1.0, 0);
    const TimeGrid grid(0.0, 50.0, static_cast<std::size_t>(state.range(0)));
    ExpansionOptions opts;
    opts.self_check = false;
    for (auto _ : state) benchmark::DoNotOptimize(dyson_expand(model, grid, 2, 1.0, opts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DysonJaynesCummings)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_NumericPropagate(benchmark::State& state) {
    const auto model = make_driven_tls(0.1, 5.0, 1.0);
    const TimeGrid grid(0.0, 100.0, static_cast<std::size_t>(state.range(0)));
    NumericOptions opts;
    opts.substeps = required_substeps(model, grid, opts);
    for (auto _ : state) benchmark::DoNotOptimize(numeric_propagate(model, grid, opts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NumericPropagate)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_ExactSchwinger(benchmark::State& state) {
    const auto model = make_schwinger_spin(1.0, 0.2, 1.0);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_schwinger_propagator(model, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_ExactSchwinger);

}  // namespace

BENCHMARK_MAIN();
