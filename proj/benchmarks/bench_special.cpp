#include <benchmark/benchmark.h>

#include <memory>

#include "layertrack/singular.hpp"

using namespace layertrack;

namespace {

void BM_Erfc(benchmark::State& state) {
    double z = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(layertrack::erfc(z));
        z = z > 6.0 ? -6.0 : z + 1e-3;
    }
}
BENCHMARK(BM_Erfc);

void BM_PsiFamily(benchmark::State& state) {
    const ProblemSpec p = make_example2();
    auto curve = std::make_shared<const CharacteristicCurve>(integrate_characteristic(p));
    auto damping = std::make_shared<const DampingFactor>(p, curve);
    const SingularContext sc(1e-4, TransformContext(curve), damping);
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sc.psi_family(x, 0.3));
        x = x > 0.99 ? 0.0 : x + 1e-3;
    }
}
BENCHMARK(BM_PsiFamily);

}  // namespace
