#include "piezosv/almansi.hpp"
#include "piezosv/elliptic.hpp"
#include "piezosv/fluxfree.hpp"
#include "piezosv/verify.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace piezosv;

namespace {

MaterialTIP material() { return {1.0, 0.8, 1.2, 0.5, 0.7, -0.3, 0.6, 0.9, 0.4, 0.5}; }

SVConstants flexure() {
    SVConstants c;
    c.v1 = {0.3, -0.2};
    c.v2 = {0.7, 0.4};
    c.b1 = 0.5;
    return c;
}

SolverConfig config(int method) {
    SolverConfig cfg;
    cfg.method = method == 0 ? LinearSolver::direct : LinearSolver::conjugate_gradient;
    return cfg;
}

void BM_Dirichlet(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Section s = Section::build(1, 1, n, n);
    const EdgeTrace g = sample_trace(s, [](Vec2 r, Vec2) {
        return std::sin(std::numbers::pi * r.x) * std::sinh(std::numbers::pi * r.y);
    });
    const DirichletProblem p{ScalarField2D(s), g};
    const SolverConfig cfg = config(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(p, cfg));
    state.SetComplexityN(static_cast<long>(s.size()));
}
BENCHMARK(BM_Dirichlet)->ArgsProduct({{33, 65, 129, 257}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Neumann(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Section s = Section::build(1, 1, n, n);
    const NeumannProblem p{ScalarField2D(s, 2.0), sample_trace(s, [](Vec2 r, Vec2 nn) { return 2.0 * r.x * nn.x; })};
    const SolverConfig cfg = config(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_neumann(p, cfg));
}
BENCHMARK(BM_Neumann)->ArgsProduct({{33, 65, 129, 257}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FluxFree(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Section s = Section::build(1.5, 1, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(solve_fluxfree(flexure(), material(), s));
}
BENCHMARK(BM_FluxFree)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_Almansi(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Section s = Section::build(1.5, 1, n, n);
    AlmansiBoundaryData bd;
    bd.k1 = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_almansi(flexure(), bd, material(), s));
}
BENCHMARK(BM_Almansi)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_Residuals(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Section s = Section::build(1.5, 1, n, n);
    const FluxFreeSolution f = solve_fluxfree(flexure(), material(), s);
    const std::vector<double> z = default_z_stations(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(residuals(f.solution, material(), z, FluxFreeWall{}));
}
BENCHMARK(BM_Residuals)->Arg(33)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
