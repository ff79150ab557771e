// Serial reference vs OpenMP for the stencil step, the phi batch and a full solve.
#include "gheat/kernels.hpp"
#include "gheat/pde_solver.hpp"
#include "gheat/special_functions.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace gheat;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_GheatStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> u(n), out(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = std::exp(-std::pow(8.0 * i / n - 4.0, 2));
    for (auto _ : state) {
        gheat_step(u, out, 0.25, 0.4, exec_of(state));
        benchmark::DoNotOptimize(out.data());
        u.swap(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}
BENCHMARK(BM_GheatStep)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}})->ArgNames({"n", "omp"});

void BM_PhiBatch(benchmark::State& state) {
    std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = -8.0 + 16.0 * i / xs.size();
    const LambdaParam lam(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(phi_eval_batch(lam, xs, exec_of(state)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhiBatch)->ArgsProduct({{256, 4096}, {0, 1}})->ArgNames({"n", "omp"})->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    GridSpec spec = GridSpec::for_horizon(0.25, 0.01);
    spec.exec = exec_of(state);
    const auto f = [](double x) { return std::exp(-x * x); };
    for (auto _ : state) benchmark::DoNotOptimize(solve_gheat(SigmaParam(0.5), f, spec).final_level().u[0]);
}
BENCHMARK(BM_Solve)->ArgsProduct({{0}, {0, 1}})->ArgNames({"_", "omp"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
