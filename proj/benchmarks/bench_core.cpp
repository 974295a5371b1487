#include <benchmark/benchmark.h>

#include <cmath>

#include "axilab/drift.hpp"
#include "axilab/gamma_solver.hpp"
#include "axilab/norms.hpp"
#include "axilab/ns_solver.hpp"
#include "axilab/presets.hpp"

using namespace axilab;

static void BM_GammaStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = make_grid(n, n, 1.0, 1.0);
    const DriftDecomposition drift = make_b3_scaled(g, 1.0);
    GammaState s;
    s.gamma = make_gamma_initial("bump", g, {{"amplitude", 1.0}});
    s.drift = std::make_shared<const DriftDecomposition>(drift);
    const double dt = 0.4 * gamma_stability_limit(g, drift.total());
    for (auto _ : state) {
        s = step_gamma(s, dt);
        benchmark::DoNotOptimize(s.gamma.raw().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GammaStep)->Arg(64)->Arg(128);

static void BM_NSStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = make_grid(n, n, 1.0, 1.0);
    NSState s = make_ns_initial("swirl_decay", g, {{"omega", 0.2}});
    NSSolver solver(g);
    const double dt = 0.4 * solver.stability_limit(s);
    for (auto _ : state) {
        s = solver.step(s, dt);
        benchmark::DoNotOptimize(s.pressure.raw().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_NSStep)->Arg(64)->Arg(128);

static void BM_BallIntegral(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = make_grid(n, n, 1.0, 1.0);
    const ScalarField f = ScalarField::from_function(
        g, Parity::even, [](double r, double z) { return r * r + z; });
    for (auto _ : state) {
        benchmark::DoNotOptimize(ball_integral(f, 0.25, 3.0, 0.5));
    }
}
BENCHMARK(BM_BallIntegral)->Arg(64)->Arg(256);

static void BM_BmoSeminorm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = make_grid(n, n, 1.0, 1.0);
    const ScalarField f = ScalarField::from_function(
        g, Parity::even, [&g](double r, double z) {
            const double dzp = g.z_distance(z, 0.5);
            return std::log(std::max(std::sqrt(r * r + dzp * dzp), 0.5 * g.dr));
        });
    for (auto _ : state) {
        benchmark::DoNotOptimize(bmo_seminorm(f));
    }
}
BENCHMARK(BM_BmoSeminorm)->Arg(64)->Arg(128);

static void BM_PressurePoisson(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = make_grid(n, n, 1.0, 1.0);
    const double k = 2.0 * std::acos(-1.0) / g.z_len;
    const ScalarField rhs = ScalarField::from_function(
        g, Parity::even, [k](double, double z) { return -k * k * std::cos(k * z); });
    PoissonSolveConfig cfg;
    cfg.rel_tol = 1e-8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pressure_poisson(rhs, cfg));
    }
}
BENCHMARK(BM_PressurePoisson)->Arg(64);

BENCHMARK_MAIN();
