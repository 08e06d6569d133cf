#include "nlshalf/solver.hpp"
#include "nlshalf/tridiagonal.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace nlshalf;

namespace {

ScenarioConfig bench_scenario(int nodes, double dt) {
    ScenarioConfig cfg;
    cfg.initial.family = ProfileFamily::gaussian;
    cfg.initial.amplitude = {1.0, 0.0};
    cfg.initial.width = 1.0;
    cfg.initial.center = 0.0;
    cfg.dirichlet.family = SignalFamily::power_decay;
    cfg.dirichlet.q0 = {1.0, 0.0};
    cfg.dirichlet.alpha = 3.0;
    cfg.grid = {100.0, nodes};
    cfg.dt = dt;
    cfg.horizon = 1.0;
    cfg.leak_tol = 1.0;
    return cfg;
}

void BM_TridiagonalSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<Complex> sub(n, Complex{0.5, 0.0}), diag(n, Complex{-1.0, 1.0}),
        super(n, Complex{0.5, 0.0});
    sub[0] = super[n - 1] = Complex{0.0, 0.0};
    diag[0] = diag[n - 1] = Complex{1.0, 0.0};
    TridiagonalFactorization lu(sub, diag, super);
    std::vector<Complex> rhs(n), x(n);
    for (int j = 0; j < n; ++j) rhs[j] = Complex{std::sin(0.01 * j), std::cos(0.02 * j)};
    for (auto _ : state) {
        x = rhs;
        lu.solve(x);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TridiagonalSolve)->Arg(1024)->Arg(8192)->Arg(65536);

void BM_SolverStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto cfg = bench_scenario(n, 0.01);
    auto q = build_initial_state(cfg);
    SolverParams params = SolverParams::from(cfg);
    for (auto _ : state) {
        step(q, params, cfg.dirichlet);
        benchmark::DoNotOptimize(q.values.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SolverStep)->Arg(1024)->Arg(8192);

void BM_ShortRun(benchmark::State& state) {
    auto cfg = bench_scenario(2048, 0.02);
    cfg.horizon = 0.5;
    cfg.sample_stride = 5;
    for (auto _ : state) {
        auto result = run(cfg);
        benchmark::DoNotOptimize(result.diagnostics.t.data());
    }
}
BENCHMARK(BM_ShortRun);

} // namespace
