#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "layertrack/characteristic.hpp"
#include "layertrack/error.hpp"
#include "layertrack/transform.hpp"
#include "oracles.hpp"

using namespace layertrack;

namespace {

// d = 0.2 moving at speed 0.2, so d(0.5) = 0.3.
TransformContext slow_context() {
    ProblemSpec p = make_example1();
    p.convection = [](double, double) { return 0.2; };
    return TransformContext(std::make_shared<const CharacteristicCurve>(integrate_characteristic(p)));
}

TransformContext example_context(const ProblemSpec& p) {
    return TransformContext(std::make_shared<const CharacteristicCurve>(integrate_characteristic(p)));
}

}  // namespace

TEST_CASE("forward map") {
    const TransformContext ctx = slow_context();
    CHECK(ctx.forward_map(0.0, 0.5) == 0.0);
    CHECK(ctx.forward_map(1.0, 0.5) == 1.0);
    CHECK(ctx.forward_map(0.15, 0.5) == doctest::Approx(0.1).epsilon(1e-13));
    const double dt = ctx.curve().position(0.37);
    CHECK(ctx.forward_map(dt, 0.37) == 0.2);
}

TEST_CASE("inverse map") {
    const TransformContext ctx = slow_context();
    CHECK(ctx.inverse_map(0.2, 0.5) == ctx.curve().position(0.5));
    CHECK(ctx.inverse_map(0.1, 0.5) == doctest::Approx(0.15).epsilon(1e-13));
    CHECK(ctx.inverse_map(0.0, 0.5) == 0.0);
    CHECK(ctx.inverse_map(1.0, 0.5) == 1.0);
}

TEST_CASE("map round trips") {
    for (int id : {1, 2}) {
        const TransformContext ctx = example_context(make_example(id));
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int n = 0; n < 2000; ++n) {
            const double x = unit(rng);
            const double s = unit(rng);
            const double t = 0.5 * unit(rng);
            worst = std::max(worst, std::abs(ctx.forward_map(ctx.inverse_map(x, t), t) - x));
            worst = std::max(worst, std::abs(ctx.inverse_map(ctx.forward_map(s, t), t) - s));
        }
        CHECK(worst <= 1e-14);
    }
}

TEST_CASE("map rejects points outside the domain") {
    const TransformContext ctx = slow_context();
    CHECK_THROWS_AS(ctx.forward_map(1.1, 0.2), Error);
    CHECK_THROWS_AS(ctx.inverse_map(-0.1, 0.2), Error);
    CHECK_THROWS_AS(ctx.forward_map(0.5, 0.7), Error);
}

TEST_CASE("metric") {
    const TransformContext ctx = slow_context();
    CHECK(ctx.metric_g(Side::left, 0.0) == 1.0);
    CHECK(ctx.metric_g(Side::right, 0.0) == 1.0);
    CHECK(ctx.metric_g(Side::left, 0.5) == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(ctx.metric_g(Side::right, 0.5) == doctest::Approx(0.765625).epsilon(1e-12));
    for (double t : {0.1, 0.3, 0.5}) {
        CHECK(ctx.metric_g(Side::right, t) < ctx.metric_g(Side::left, t));
    }
}

TEST_CASE("metric bounds") {
    for (int id : {1, 2}) {
        const ProblemSpec p = make_example(id);
        const TransformContext ctx = example_context(p);
        const double d = p.jump_location;
        const double T = p.final_time;
        const double delta = (1.0 - ctx.curve().final_position()) / (1.0 - d);
        double sup_a = 0.0;
        for (int i = 0; i <= 100; ++i) {
            for (int j = 0; j <= 100; ++j) sup_a = std::max(sup_a, std::abs(p.convection(i / 100.0, T * j / 100.0)));
        }
        for (int j = 0; j <= 50; ++j) {
            const double t = T * j / 50.0;
            const double left = std::sqrt(ctx.metric_g(Side::left, t));
            const double right = std::sqrt(ctx.metric_g(Side::right, t));
            CHECK(left >= 1.0);
            CHECK(left <= 1.0 + T * sup_a / d + 1e-12);
            CHECK(right >= delta - 1e-12);
            CHECK(right <= 1.0);
        }
    }
}

TEST_CASE("kappa") {
    const ProblemSpec p = make_example1();
    const TransformContext ctx = example_context(p);
    const double t = 0.5;
    CHECK(ctx.convection_kappa(p, 0.0, t) ==
          doctest::Approx(std::sqrt(ctx.metric_g(Side::left, t)) * p.convection(0.0, t)).epsilon(1e-14));
    CHECK(std::abs(ctx.convection_kappa(p, 0.2, t, Side::left)) <= 1e-15);
    CHECK(std::abs(ctx.convection_kappa(p, 0.2, t, Side::right)) <= 1e-15);

    // Direct evaluation at x = 0.1 with the closed-form path.
    const double dt = oracle::example1_path(t);
    const double root_g = dt / 0.2;
    const double s = root_g * 0.1;
    const auto a = [](double z) { return (0.81 - (z - 0.2) * (z - 0.2)) / 4.0; };
    const double expected = root_g * (a(s) + a(dt) * (0.5 - 1.0));
    CHECK(ctx.convection_kappa(p, 0.1, t) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("kappa is bounded by A |d - x|") {
    for (int id : {1, 2}) {
        const ProblemSpec p = make_example(id);
        auto curve = std::make_shared<const CharacteristicCurve>(integrate_characteristic(p));
        const TransformContext ctx(curve);
        const HorizonDiagnostics h = horizon_diagnostics(*curve, p);
        const double d = p.jump_location;
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            for (int j = 0; j <= 20; ++j) {
                const double t = p.final_time * j / 20.0;
                CHECK(std::abs(ctx.convection_kappa(p, x, t)) <= h.A * std::abs(d - x) + 1e-12);
            }
        }
    }
}

TEST_CASE("layer weight") {
    CHECK(layer_weight(0.0, 0.2, Side::left) == 1.0);
    CHECK(layer_weight(0.2, 0.2, Side::left) == 0.0);
    CHECK(layer_weight(1.0, 0.2, Side::right) == 1.0);
    CHECK(layer_weight(0.6, 0.2, Side::right) == doctest::Approx(0.5));
    CHECK(side_of(0.2, 0.2) == Side::left);
    CHECK(side_of(0.2000001, 0.2) == Side::right);
}
