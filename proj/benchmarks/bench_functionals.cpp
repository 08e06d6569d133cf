#include "nlshalf/functionals.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace nlshalf;

namespace {

StateVector wave_state(int nodes) {
    StateVector s;
    s.grid = {100.0, nodes};
    s.t = 1.5;
    s.values.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
        const double x = s.grid.x(j);
        s.values[j] = std::exp(Complex{0.0, 0.3} * x) * std::exp(-0.05 * x);
    }
    return s;
}

void BM_SpatialNorms(benchmark::State& state) {
    const auto s = wave_state(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto n = spatial_norms(s);
        benchmark::DoNotOptimize(n);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpatialNorms)->Arg(1024)->Arg(8192);

void BM_MomentDiagnostics(benchmark::State& state) {
    const auto s = wave_state(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto m = moment_diagnostics(s);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MomentDiagnostics)->Arg(1024)->Arg(8192);

void BM_RunningIntegral(benchmark::State& state) {
    const int n = 100000;
    std::vector<double> t(n), f(n);
    for (int k = 0; k < n; ++k) {
        t[k] = 0.01 * k;
        f[k] = std::pow(1.0 + t[k], -1.5);
    }
    for (auto _ : state) {
        auto out = running_weighted_integral(t, f, 1.1);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunningIntegral);

} // namespace
