#include <doctest.h>

#include <cmath>

#include "layertrack/characteristic.hpp"
#include "layertrack/error.hpp"
#include "oracles.hpp"

using namespace layertrack;

namespace {

ProblemSpec constant_speed(double speed, double d, double T) {
    ProblemSpec p = make_example1();
    p.name = "constant-speed";
    p.convection = [speed](double, double) { return speed; };
    p.jump_location = d;
    p.final_time = T;
    return p;
}

}  // namespace

TEST_CASE("constant speed transport") {
    const CharacteristicCurve c = integrate_characteristic(constant_speed(1.0, 0.2, 0.5));
    CHECK(c.final_position() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(c.position(0.25) == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(c.position(0.0) == 0.2);
}

TEST_CASE("closed-form oracles on 1000 samples") {
    const CharacteristicCurve c1 = integrate_characteristic(make_example1());
    const CharacteristicCurve c2 = integrate_characteristic(make_example2());
    CHECK(!c1.is_closed_form());
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.5 * i / 999.0;
        worst1 = std::max(worst1, std::abs(c1.position(t) - oracle::example1_path(t)));
        worst2 = std::max(worst2, std::abs(c2.position(t) - oracle::example2_path(t)));
    }
    CHECK(worst1 <= 1e-10);
    CHECK(worst2 <= 1e-10);
    CHECK(c1.final_position() == doctest::Approx(0.300825).epsilon(1e-6));
    CHECK(c2.final_position() == doctest::Approx(0.683650).epsilon(1e-6));
    CHECK(std::abs(c1.position(0.25) - oracle::example1_path(0.25)) <= 1e-10);
}

TEST_CASE("nodes are reproduced and carry exact slopes") {
    const ProblemSpec p = make_example2();
    const CharacteristicCurve c = integrate_characteristic(p);
    CHECK(c.position(0.0) == p.jump_location);
    for (const auto& node : c.nodes()) {
        CHECK(c.position(node.t) == node.position);
        CHECK(node.velocity == p.convection(node.position, node.t));
    }
}

TEST_CASE("path is strictly increasing") {
    for (int id : {1, 2}) {
        const CharacteristicCurve c = integrate_characteristic(make_example(id));
        double prev = c.position(0.0);
        for (int i = 1; i < 1000; ++i) {
            const double next = c.position(0.5 * i / 999.0);
            CHECK(next > prev);
            prev = next;
        }
    }
}

TEST_CASE("velocity matches the convection along the path") {
    const ProblemSpec p = make_example1();
    const CharacteristicCurve c = integrate_characteristic(p);
    for (double t : {0.0, 0.1234, 0.3, 0.5}) {
        CHECK(c.velocity(t) == doctest::Approx(p.convection(c.position(t), t)).epsilon(1e-9));
    }
}

TEST_CASE("RK4 Richardson ratio is near 16") {
    // Step counts chosen so the differences sit well above rounding.
    const auto ratio = [](const ProblemSpec& p, int steps) {
        const double d1 = rk4_final_position(p, steps);
        const double d2 = rk4_final_position(p, 2 * steps);
        const double d3 = rk4_final_position(p, 4 * steps);
        return (d1 - d2) / (d2 - d3);
    };
    for (double r : {ratio(make_example1(), 8), ratio(make_example2(), 64)}) {
        CHECK(r >= 14.0);
        CHECK(r <= 18.0);
    }
}

TEST_CASE("halving the step changes d(T) by less than the tolerance") {
    const ProblemSpec p = make_example1();
    const CharacteristicCurve c = integrate_characteristic(p, 1e-12);
    const int steps = static_cast<int>(c.nodes().size()) - 1;
    CHECK(std::abs(rk4_final_position(p, 2 * steps) - c.final_position()) < 1e-12);
}

TEST_CASE("closed-form override bypasses the integrator") {
    ProblemSpec p = make_example1();
    p.exact_characteristic = oracle::example1_path;
    const CharacteristicCurve c = integrate_characteristic(p);
    CHECK(c.is_closed_form());
    CHECK(c.position(0.3) == oracle::example1_path(0.3));
}

TEST_CASE("errors") {
    const CharacteristicCurve c = integrate_characteristic(make_example1());
    try {
        c.position(0.6);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
    CHECK_THROWS_AS(c.position(-1e-9), Error);

    try {
        integrate_characteristic(constant_speed(2.0, 0.5, 0.5));
        FAIL("expected LayerHitsBoundary");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LayerHitsBoundary);
    }
}

TEST_CASE("horizon diagnostics") {
    const ProblemSpec p1 = make_example1();
    const HorizonDiagnostics h1 = horizon_diagnostics(integrate_characteristic(p1), p1);
    const double delta1 = (1.0 - oracle::example1_path(0.5)) / 0.8;
    CHECK(h1.delta == doctest::Approx(delta1).epsilon(1e-10));
    CHECK(h1.delta == doctest::Approx(0.873966).epsilon(1e-5));
    CHECK(h1.gamma_condition_lhs == doctest::Approx(0.4 / delta1).epsilon(1e-9));
    CHECK(h1.gamma_condition_ok);
    CHECK(h1.max_gamma > 0.0);
    CHECK(h1.A > 0.0);

    const ProblemSpec p2 = make_example2();
    const HorizonDiagnostics h2 = horizon_diagnostics(integrate_characteristic(p2), p2);
    const double delta2 = (1.0 - oracle::example2_path(0.5)) / 0.9;
    CHECK(h2.delta == doctest::Approx(delta2).epsilon(1e-10));
    CHECK(h2.gamma_condition_lhs == doctest::Approx(2.0 / delta2).epsilon(1e-9));
    CHECK(h2.gamma_condition_lhs == doctest::Approx(5.69).epsilon(1e-3));
    CHECK(!h2.gamma_condition_ok);
}
