#include "layertrack/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "layertrack/error.hpp"
#include "uniform_grid.hpp"

namespace layertrack {

namespace {

constexpr double kBoundaryGuard = 1e-12;

void check_inside(double position, double t) {
    if (!(position < 1.0 - kBoundaryGuard)) {
        throw Error(ErrorCode::LayerHitsBoundary,
                    "characteristic reaches s = 1 at t = " + std::to_string(t));
    }
}

std::vector<CharacteristicNode> rk4_march(const ProblemSpec& p, int steps) {
    const SpaceTimeFunction& a = p.convection;
    const double h = p.final_time / steps;
    std::vector<CharacteristicNode> nodes;
    nodes.reserve(static_cast<std::size_t>(steps) + 1);

    double y = p.jump_location;
    nodes.push_back({0.0, y, a(y, 0.0)});
    for (int n = 0; n < steps; ++n) {
        const double t = detail::uniform_node(p.final_time, n, steps);
        const double k1 = nodes.back().velocity;
        const double k2 = a(y + 0.5 * h * k1, t + 0.5 * h);
        const double k3 = a(y + 0.5 * h * k2, t + 0.5 * h);
        const double k4 = a(y + h * k3, t + h);
        y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        const double t_next = detail::uniform_node(p.final_time, n + 1, steps);
        check_inside(y, t_next);
        nodes.push_back({t_next, y, a(y, t_next)});
    }
    return nodes;
}

double slope_in_s(const SpaceTimeFunction& fn, double s, double t) {
    constexpr double h = 1e-6;
    return (fn(s + h, t) - fn(s - h, t)) / (2.0 * h);
}

}  // namespace

CharacteristicCurve::CharacteristicCurve(double start, double final_time,
                                         std::vector<CharacteristicNode> nodes, TimeFunction exact)
    : start_(start),
      final_time_(final_time),
      step_(0.0),
      nodes_(std::move(nodes)),
      exact_(std::move(exact)) {
    if (nodes_.size() < 2 || !(final_time_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "characteristic needs at least two nodes");
    }
    step_ = final_time_ / static_cast<double>(nodes_.size() - 1);
}

std::size_t CharacteristicCurve::interval(double t) const {
    if (!(t >= 0.0 && t <= final_time_)) {
        throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " outside [0, T]");
    }
    const auto last = nodes_.size() - 2;
    auto k = static_cast<std::size_t>(t / step_);
    k = std::min(k, last);
    // Guard against t / step landing one cell off through rounding.
    while (k > 0 && nodes_[k].t > t) --k;
    while (k < last && nodes_[k + 1].t <= t) ++k;
    return k;
}

double CharacteristicCurve::position(double t) const {
    const std::size_t k = interval(t);
    if (exact_) {
        return t == 0.0 ? start_ : exact_(t);
    }
    const CharacteristicNode& n0 = nodes_[k];
    const CharacteristicNode& n1 = nodes_[k + 1];
    if (t == n0.t) return n0.position;
    if (t == n1.t) return n1.position;

    const double h = n1.t - n0.t;
    const double secant = (n1.position - n0.position) / h;
    double m0 = n0.velocity;
    double m1 = n1.velocity;
    // Fritsch-Carlson limiter; inactive for smooth increasing paths.
    if (secant > 0.0) {
        const double a = m0 / secant;
        const double b = m1 / secant;
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m0 = tau * a * secant;
            m1 = tau * b * secant;
        }
    }
    const double u = (t - n0.t) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * n0.position + h10 * h * m0 + h01 * n1.position + h11 * h * m1;
}

double CharacteristicCurve::velocity(double t) const {
    const std::size_t k = interval(t);
    const CharacteristicNode& n0 = nodes_[k];
    const CharacteristicNode& n1 = nodes_[k + 1];
    if (t == n0.t) return n0.velocity;
    if (t == n1.t) return n1.velocity;
    const double h = n1.t - n0.t;
    const double u = (t - n0.t) / h;
    const double dh00 = (6.0 * u * u - 6.0 * u) / h;
    const double dh10 = 3.0 * u * u - 4.0 * u + 1.0;
    const double dh01 = (-6.0 * u * u + 6.0 * u) / h;
    const double dh11 = 3.0 * u * u - 2.0 * u;
    return dh00 * n0.position + dh10 * n0.velocity + dh01 * n1.position + dh11 * n1.velocity;
}

double rk4_final_position(const ProblemSpec& problem, int steps) {
    if (steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "RK4 needs at least one step");
    }
    return rk4_march(problem, steps).back().position;
}

CharacteristicCurve integrate_characteristic(const ProblemSpec& problem, double tolerance) {
    IntegrationOptions options;
    options.tolerance = tolerance;
    return integrate_characteristic(problem, options);
}

CharacteristicCurve integrate_characteristic(const ProblemSpec& problem,
                                             const IntegrationOptions& options) {
    if (!(options.tolerance > 0.0) || options.initial_steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "tolerance and step count must be positive");
    }
    const double d = problem.jump_location;
    const double T = problem.final_time;

    if (problem.exact_characteristic) {
        const int steps = options.initial_steps;
        std::vector<CharacteristicNode> nodes;
        nodes.reserve(static_cast<std::size_t>(steps) + 1);
        for (int n = 0; n <= steps; ++n) {
            const double t = detail::uniform_node(T, n, steps);
            const double y = n == 0 ? d : problem.exact_characteristic(t);
            check_inside(y, t);
            nodes.push_back({t, y, problem.convection(y, t)});
        }
        return CharacteristicCurve(d, T, std::move(nodes), problem.exact_characteristic);
    }

    int steps = options.initial_steps;
    std::vector<CharacteristicNode> coarse = rk4_march(problem, steps);
    for (int r = 0; r < options.max_refinements; ++r) {
        steps *= 2;
        std::vector<CharacteristicNode> fine = rk4_march(problem, steps);
        const double change = std::abs(fine.back().position - coarse.back().position);
        coarse = std::move(fine);
        if (change < options.tolerance) {
            break;
        }
    }
    return CharacteristicCurve(d, T, std::move(coarse));
}

HorizonDiagnostics horizon_diagnostics(const CharacteristicCurve& curve, const ProblemSpec& problem,
                                       int samples) {
    const double d = problem.jump_location;
    const double T = problem.final_time;
    const auto& a = problem.convection;
    samples = std::max(samples, 2);

    HorizonDiagnostics out;
    out.delta = (1.0 - curve.final_position()) / (1.0 - d);

    for (int j = 0; j < samples; ++j) {
        const double t = detail::uniform_node(T, j, samples - 1);
        const double dt = curve.position(t);
        const double left_stretch = dt / d;
        const double right_stretch = (1.0 - dt) / (1.0 - d);
        for (int i = 0; i < samples; ++i) {
            const double s = static_cast<double>(i) / (samples - 1);
            const double slope = std::abs(slope_in_s(a, s, t));
            out.sup_convection = std::max(out.sup_convection, std::abs(a(s, t)));
            out.sup_slope = std::max(out.sup_slope, slope);

            // Mapped-coordinate slope a_x = a_s ds/dx on each side of the layer.
            const double x = static_cast<double>(i) / (samples - 1);
            if (x <= d) {
                const double sl = left_stretch * x;
                out.sup_mapped_slope =
                    std::max(out.sup_mapped_slope, std::abs(slope_in_s(a, sl, t)) * left_stretch);
            }
            if (x >= d) {
                const double sr = 1.0 - right_stretch * (1.0 - x);
                out.sup_mapped_slope =
                    std::max(out.sup_mapped_slope, std::abs(slope_in_s(a, sr, t)) * right_stretch);
            }
        }
    }

    out.A = (1.0 + T * out.sup_convection / d) *
            (out.sup_mapped_slope + out.sup_convection * std::max(1.0 / d, 1.0 / (1.0 - d)));
    out.gamma_condition_lhs = 2.0 * T / out.delta * out.sup_slope;
    out.gamma_condition_ok = out.gamma_condition_lhs < 1.0;
    out.max_gamma = out.gamma_condition_ok ? 1.0 - out.gamma_condition_lhs : 0.0;
    return out;
}

}  // namespace layertrack
