#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "wedge/appendix.hpp"
#include "wedge/kernel.hpp"
#include "wedge/solver.hpp"

using namespace wedge;

namespace {

CoefficientPath two_piece_path() {
    Matrix a(2, 2);
    a << 1.5, 0.3, 0.3, 0.7;
    return CoefficientPath({-INFINITY, 0.1, INFINITY}, {Matrix::Identity(2, 2), a});
}

void BM_Gamma(benchmark::State& state) {
    const auto path = two_piece_path();
    Vector x(2), y(2);
    x << 0.3, 0.1;
    y << -0.2, 0.4;
    for (auto _ : state) { benchmark::DoNotOptimize(gamma(path, as_span(x), as_span(y), 0.5, 0.0)); }
}
BENCHMARK(BM_Gamma);

void BM_GammaDeriv(benchmark::State& state) {
    const auto path = two_piece_path();
    Vector x(2), y(2);
    x << 0.3, 0.1;
    y << -0.2, 0.4;
    const MultiIndex alpha{1, 1};
    const MultiIndex beta{0, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_deriv(path, alpha, beta, false, as_span(x), as_span(y), 0.5, 0.0));
    }
}
BENCHMARK(BM_GammaDeriv);

// Backward-Euler solve on the quarter plane; the argument is the number of steps.
void BM_SolverSteps(benchmark::State& state) {
    MeshSpec spec;
    spec.h = 0.04;
    spec.r_max = 2.0;
    spec.n_theta = 24;
    spec.dt_min = spec.dt_max = 0.005;
    spec.t_end = 0.005 * static_cast<double>(state.range(0));
    auto mesh = std::make_shared<const SectorMesh>(spec.build(std::numbers::pi / 2, CoefficientPath::identity(2)));
    ProblemSpec problem;
    problem.initial.assign(mesh->node_count(), 0.0);
    for (std::size_t i = 0; i < mesh->nr(); ++i) {
        for (std::size_t j = 0; j < mesh->nt(); ++j) {
            const double dx = mesh->x(i, j) - 0.5, dy = mesh->y(i, j) - 0.5;
            problem.initial[mesh->index(i, j)] = std::exp(-(dx * dx + dy * dy) / 0.02);
        }
    }
    for (auto _ : state) {
        WedgeSolver solver(problem, mesh);
        solver.run([](std::size_t, double, std::span<const double> u) { benchmark::DoNotOptimize(u.data()); });
    }
}
BENCHMARK(BM_SolverSteps)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_AxisOracle(benchmark::State& state) {
    AxisIntegralParams p;
    p.a = 0.5;
    p.b = 0.5;
    p.c = 0.5;
    p.phi.slope = 1.0;
    p.x1 = 1.3;
    p.y1 = 0.2;
    for (auto _ : state) { benchmark::DoNotOptimize(axis_integral_oracle(p).ratio); }
}
BENCHMARK(BM_AxisOracle)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
