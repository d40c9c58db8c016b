#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "layertrack/error.hpp"
#include "layertrack/problem.hpp"

using namespace layertrack;

TEST_CASE("example 1 data") {
    const ProblemSpec p = make_example1();
    CHECK(p.jump_location == 0.2);
    CHECK(p.final_time == 0.5);
    CHECK(p.jump() == 3.0);
    CHECK(!p.has_reaction());
    CHECK(p.convection(1.0, 0.0) == doctest::Approx(0.0425).epsilon(1e-15));
    CHECK(p.boundary_left(0.3) == -2.0);
    CHECK(p.boundary_right(0.3) == 1.0);
    CHECK(p.initial_left(0.1) == -2.0);
    CHECK(p.initial_right(0.7) == 1.0);
}

TEST_CASE("example 2 data") {
    const ProblemSpec p = make_example2();
    CHECK(p.jump_location == 0.1);
    CHECK(p.jump() == 3.0);
    REQUIRE(p.has_reaction());
    CHECK(p.reaction(0.1, 0.0) == doctest::Approx(0.1).epsilon(1e-15));
    for (double t : {0.0, 0.17, 0.5}) CHECK(p.convection(0.0, t) == 1.0);
}

TEST_CASE("coefficient callbacks reproduce the closed forms") {
    const ProblemSpec p1 = make_example1();
    const ProblemSpec p2 = make_example2();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const double s = unit(rng);
        const double t = 0.5 * unit(rng);
        const double f = 4 * s * (1 - s) * t + t * t;
        worst = std::max(worst, std::abs(p1.convection(s, t) - (0.81 - (s - 0.2) * (s - 0.2)) / 4));
        worst = std::max(worst, std::abs(p1.source(s, t) - f));
        worst = std::max(worst, std::abs(p2.convection(s, t) - (1 + s * s)));
        worst = std::max(worst, std::abs(p2.reaction(s, t) - (s + t)));
        worst = std::max(worst, std::abs(p2.source(s, t) - f));
    }
    CHECK(worst <= 4 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("registry") {
    CHECK(make_example(1).name == "example1");
    CHECK(make_example(2).name == "example2");
    CHECK_THROWS_AS(make_example(3), Error);
}

TEST_CASE("validate example 1") {
    const ValidationReport r = validate(make_example1());
    CHECK(r.alpha == doctest::Approx(0.0425).epsilon(1e-12));
    CHECK(r.min_convection == doctest::Approx(0.0425).epsilon(1e-12));
    CHECK(r.warnings.empty());
    CHECK(r.jump == 3.0);
    CHECK(r.reaction_nonnegative);
    CHECK(resolve_alpha(make_example1()) == doctest::Approx(0.0425).epsilon(1e-12));
}

TEST_CASE("validate example 2 reports the slope warnings") {
    const ValidationReport r = validate(make_example2());
    CHECK(r.has_warning(ValidationWarning::ConvectionSlopeAtJump));
    CHECK(r.has_warning(ValidationWarning::ReactionSlopeAtJump));
    CHECK(!r.has_warning(ValidationWarning::DerivativeJump));
    bool found = false;
    for (const auto& m : r.messages) found = found || m == "â_s(d,0) ≠ 0";
    CHECK(found);
    CHECK(r.convection_slope_at_jump == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("validate is pure") {
    const ValidationReport a = validate(make_example2());
    const ValidationReport b = validate(make_example2());
    CHECK(a.min_convection == b.min_convection);
    CHECK(a.min_reaction == b.min_reaction);
    CHECK(a.convection_slope_at_jump == b.convection_slope_at_jump);
    CHECK(a.messages == b.messages);
}

TEST_CASE("validate rejects bad data") {
    ProblemSpec p = make_example1();
    p.convection = [](double, double) { return -1.0; };
    try {
        validate(p);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveConvection);
    }

    ProblemSpec q = make_example1();
    q.reaction = [](double s, double) { return s - 0.5; };
    try {
        validate(q);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeReaction);
    }

    ProblemSpec r = make_example1();
    r.initial_right = [](double) { return std::numeric_limits<double>::infinity(); };
    try {
        validate(r);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteJump);
    }

    CHECK_THROWS_AS(validate(make_example1(), 1), Error);
}

TEST_CASE("derivative jump is reported") {
    ProblemSpec p = make_example1();
    p.initial_right = [](double s) { return 1.0 + s; };
    const ValidationReport r = validate(p);
    CHECK(r.has_warning(ValidationWarning::DerivativeJump));
}

TEST_CASE("explicit alpha wins") {
    ProblemSpec p = make_example1();
    p.alpha = 0.01;
    CHECK(resolve_alpha(p) == 0.01);
    CHECK(validate(p).alpha == 0.01);
}
