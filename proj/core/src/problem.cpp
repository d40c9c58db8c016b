#include "layertrack/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layertrack/error.hpp"
#include "uniform_grid.hpp"

namespace layertrack {

namespace {

constexpr double kSlopeStep = 1e-5;
constexpr double kSlopeTolerance = 1e-6;

double central_slope(const SpaceTimeFunction& fn, double s, double t) {
    return (fn(s + kSlopeStep, t) - fn(s - kSlopeStep, t)) / (2.0 * kSlopeStep);
}

// Second-order one-sided differences, staying inside each branch's domain.
double left_slope(const SpaceFunction& fn, double d) {
    const double h = kSlopeStep;
    return (3.0 * fn(d) - 4.0 * fn(d - h) + fn(d - 2.0 * h)) / (2.0 * h);
}

double right_slope(const SpaceFunction& fn, double d) {
    const double h = kSlopeStep;
    return (-3.0 * fn(d) + 4.0 * fn(d + h) - fn(d + 2.0 * h)) / (2.0 * h);
}

double sample_min(const SpaceTimeFunction& fn, double final_time, int density) {
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < density; ++i) {
        const double s = static_cast<double>(i) / (density - 1);
        for (int j = 0; j < density; ++j) {
            const double t = detail::uniform_node(final_time, j, density - 1);
            lowest = std::min(lowest, fn(s, t));
        }
    }
    return lowest;
}

void check_shape(const ProblemSpec& p) {
    if (!p.convection || !p.source || !p.initial_left || !p.initial_right || !p.boundary_left ||
        !p.boundary_right) {
        throw Error(ErrorCode::InvalidProblem, "problem '" + p.name + "' has unset callbacks");
    }
    if (!(p.jump_location > 0.0 && p.jump_location < 1.0)) {
        throw Error(ErrorCode::InvalidProblem, "jump location must lie in (0,1)");
    }
    if (!(p.final_time > 0.0)) {
        throw Error(ErrorCode::InvalidProblem, "final time must be positive");
    }
}

ProblemSpec common_example_data(double d) {
    ProblemSpec p;
    p.source = [](double s, double t) { return 4.0 * s * (1.0 - s) * t + t * t; };
    p.initial_left = [](double) { return -2.0; };
    p.initial_right = [](double) { return 1.0; };
    p.jump_location = d;
    p.final_time = 0.5;
    p.boundary_left = [](double) { return -2.0; };
    p.boundary_right = [](double) { return 1.0; };
    return p;
}

}  // namespace

ProblemSpec make_example1() {
    ProblemSpec p = common_example_data(0.2);
    p.name = "example1";
    p.convection = [](double s, double) {
        const double r = s - 0.2;
        return (0.9 * 0.9 - r * r) / 4.0;
    };
    return p;
}

ProblemSpec make_example2() {
    ProblemSpec p = common_example_data(0.1);
    p.name = "example2";
    p.convection = [](double s, double) { return 1.0 + s * s; };
    p.reaction = [](double s, double t) { return s + t; };
    return p;
}

ProblemSpec make_example(int id) {
    switch (id) {
        case 1: return make_example1();
        case 2: return make_example2();
        default:
            throw Error(ErrorCode::InvalidArgument,
                        "unknown example id " + std::to_string(id) + " (expected 1 or 2)");
    }
}

bool ValidationReport::has_warning(ValidationWarning w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

ValidationReport validate(const ProblemSpec& problem, int grid_density) {
    if (grid_density < 2) {
        throw Error(ErrorCode::InvalidArgument, "grid density must be at least 2");
    }
    check_shape(problem);

    ValidationReport report;
    report.min_convection = sample_min(problem.convection, problem.final_time, grid_density);
    if (!(report.min_convection > 0.0)) {
        throw Error(ErrorCode::NonPositiveConvection,
                    "sampled convection minimum is " + std::to_string(report.min_convection));
    }
    report.alpha = problem.alpha.value_or(report.min_convection);

    if (problem.has_reaction()) {
        report.min_reaction = sample_min(problem.reaction, problem.final_time, grid_density);
        report.reaction_nonnegative = report.min_reaction >= 0.0;
        if (!report.reaction_nonnegative) {
            throw Error(ErrorCode::NegativeReaction,
                        "sampled reaction minimum is " + std::to_string(report.min_reaction));
        }
    }

    const double d = problem.jump_location;
    report.jump = problem.jump();
    if (!std::isfinite(report.jump)) {
        throw Error(ErrorCode::NonFiniteJump, "initial-data jump at d is not finite");
    }

    report.derivative_jump =
        right_slope(problem.initial_right, d) - left_slope(problem.initial_left, d);
    if (std::abs(report.derivative_jump) > kSlopeTolerance) {
        report.warnings.push_back(ValidationWarning::DerivativeJump);
        report.messages.emplace_back("[phi'](d) != 0");
    }

    report.convection_slope_at_jump = central_slope(problem.convection, d, 0.0);
    if (std::abs(report.convection_slope_at_jump) > kSlopeTolerance) {
        report.warnings.push_back(ValidationWarning::ConvectionSlopeAtJump);
        report.messages.emplace_back("â_s(d,0) ≠ 0");
    }
    if (problem.has_reaction()) {
        report.reaction_slope_at_jump = central_slope(problem.reaction, d, 0.0);
        if (std::abs(report.reaction_slope_at_jump) > kSlopeTolerance) {
            report.warnings.push_back(ValidationWarning::ReactionSlopeAtJump);
            report.messages.emplace_back("b̂_s(d,0) ≠ 0");
        }
    }
    return report;
}

double resolve_alpha(const ProblemSpec& problem) {
    if (problem.alpha) {
        return *problem.alpha;
    }
    return sample_min(problem.convection, problem.final_time, 101);
}

}  // namespace layertrack
