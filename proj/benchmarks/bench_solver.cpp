#include <benchmark/benchmark.h>

#include <cmath>

#include "layertrack/harness.hpp"

using namespace layertrack;

namespace {

const std::shared_ptr<const PreparedProblem>& prepared(int example) {
    static const std::shared_ptr<const PreparedProblem> cache[2] = {prepare(make_example1()),
                                                                    prepare(make_example2())};
    return cache[example - 1];
}

// Full N x N march. Args: example, N.
void BM_Solve(benchmark::State& state) {
    const auto& pp = prepared(static_cast<int>(state.range(0)));
    const int N = static_cast<int>(state.range(1));
    for (auto _ : state) {
        DiscreteSolution sol = solve(pp, std::ldexp(1.0, -12), N, N);
        benchmark::DoNotOptimize(sol.value(N / 2, N));
    }
}
BENCHMARK(BM_Solve)->ArgsProduct({{1, 2}, {32, 64, 128, 256, 512}})->Unit(benchmark::kMillisecond);

void BM_TwoMeshDifference(benchmark::State& state) {
    const auto& pp = prepared(1);
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(two_mesh_difference(pp, std::ldexp(1.0, -8), N, N));
}
BENCHMARK(BM_TwoMeshDifference)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_Tridiagonal(benchmark::State& state) {
    const auto& pp = prepared(2);
    const int N = static_cast<int>(state.range(0));
    const double eps = std::ldexp(1.0, -12);
    const SpaceMesh mesh =
        build_space_mesh(N, pp->problem.jump_location, transition_points(mesh_parameters(*pp, eps, N)));
    const TransformedProblem tp(pp, eps);
    std::vector<double> prev(static_cast<std::size_t>(N + 1), 1.0);
    const TridiagonalSystem sys = assemble_step(tp, mesh, prev, 0.25, 0.25 / N, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_tridiagonal(sys));
}
BENCHMARK(BM_Tridiagonal)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace
