#pragma once

#include <span>
#include <vector>

#include "layertrack/problem.hpp"

namespace layertrack {

struct CharacteristicNode {
    double t;
    double position;  ///< d(t)
    double velocity;  ///< d'(t) = a(d(t), t)
};

/// Path d(t) of the interior layer, i.e. the solution of d'(t) = a(d(t), t),
/// d(0) = d. Stored on a uniform grid and evaluated between nodes by
/// monotone cubic Hermite interpolation using the exact node slopes.
class CharacteristicCurve {
public:
    CharacteristicCurve(double start, double final_time, std::vector<CharacteristicNode> nodes,
                        TimeFunction exact = {});

    /// d(t); throws OutOfRange outside [0, T].
    double position(double t) const;
    /// d'(t) from the derivative of the Hermite interpolant.
    double velocity(double t) const;

    double start() const noexcept { return start_; }
    double final_time() const noexcept { return final_time_; }
    double final_position() const noexcept { return nodes_.back().position; }
    bool is_closed_form() const noexcept { return static_cast<bool>(exact_); }

    std::span<const CharacteristicNode> nodes() const noexcept { return nodes_; }

private:
    std::size_t interval(double t) const;

    double start_;
    double final_time_;
    double step_;
    std::vector<CharacteristicNode> nodes_;
    TimeFunction exact_;
};

struct IntegrationOptions {
    double tolerance = 1e-12;  ///< accept when successive d(T) differ by less than this
    int initial_steps = 2048;
    int max_refinements = 8;
};

/// Classic RK4 with step T/initial_steps, halved until d(T) is stable to the
/// tolerance. Uses the problem's closed form instead when one is attached.
/// Throws LayerHitsBoundary when d(t) reaches 1 - 1e-12 before T.
CharacteristicCurve integrate_characteristic(const ProblemSpec& problem,
                                             const IntegrationOptions& options = {});
CharacteristicCurve integrate_characteristic(const ProblemSpec& problem, double tolerance);

/// d(T) from a single fixed-step RK4 pass with the given number of steps.
double rk4_final_position(const ProblemSpec& problem, int steps);

struct HorizonDiagnostics {
    double delta = 0.0;            ///< (1 - d(T)) / (1 - d)
    double A = 0.0;                ///< bound |kappa(x,t)| <= A |d - x|
    double sup_convection = 0.0;   ///< sampled ||a||
    double sup_slope = 0.0;        ///< sampled ||a_s|| in physical coordinates
    double sup_mapped_slope = 0.0; ///< sampled ||a_x|| in mapped coordinates
    double gamma_condition_lhs = 0.0;  ///< (2T/delta) ||a_s||
    bool gamma_condition_ok = false;   ///< lhs < 1
    double max_gamma = 0.0;            ///< largest admissible gamma, 0 when the condition fails
};

/// Diagnostic only: the gamma condition is reported, never enforced.
HorizonDiagnostics horizon_diagnostics(const CharacteristicCurve& curve, const ProblemSpec& problem,
                                       int samples = 101);

}  // namespace layertrack
