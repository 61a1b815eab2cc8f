#include <benchmark/benchmark.h>

#include "biphoton/amplitude.hpp"
#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/entanglement.hpp"
#include "biphoton/scenario.hpp"

using namespace biphoton;

namespace {

ScenarioConfig benchmark_scenario(double np = -0.1436) {
    const auto li = solve_phase_matching(find_model("LiIO3"), 325.0);
    return make_scenario(1.5, 325.0, li.n_o_signal, np, 0.004114);
}

void bm_phase_matching_solve(benchmark::State& state) {
    const auto& model = find_model("LiIO3");
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_phase_matching(model, 325.0));
    }
}
BENCHMARK(bm_phase_matching_solve);

void bm_amplitude_eval(benchmark::State& state) {
    const auto cfg = benchmark_scenario();
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-7;
        benchmark::DoNotOptimize(amplitude(cfg, t, -0.3 * t));
    }
}
BENCHMARK(bm_amplitude_eval);

void bm_amplitude_grid(benchmark::State& state) {
    const auto cfg = benchmark_scenario();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            amplitude_grid(cfg, {-0.096, 0.096, n, -0.096, 0.096, n}));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_amplitude_grid)->Arg(256)->Arg(1024);

void bm_singles_quadrature_point(benchmark::State& state) {
    auto cfg = benchmark_scenario();
    cfg.np_eff = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            single_particle_quadrature(cfg, {-0.002, 0.002, 3}));
    }
}
BENCHMARK(bm_singles_quadrature_point);

void bm_coordinate_cut(benchmark::State& state) {
    const auto cfg = benchmark_scenario();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            coordinate_cut(cfg, CoordinateCut::coincidence, {-140.0, 140.0, n}));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_coordinate_cut)->Arg(101)->Arg(401);

void bm_schmidt(benchmark::State& state) {
    const auto cfg = benchmark_scenario();
    const int n = static_cast<int>(state.range(0));
    const auto grid = amplitude_grid(cfg, {-0.096, 0.096, n, -0.096, 0.096, n});
    for (auto _ : state) {
        benchmark::DoNotOptimize(schmidt_from_grid(grid));
    }
}
BENCHMARK(bm_schmidt)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
