#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace layertrack {

using SpaceTimeFunction = std::function<double(double s, double t)>;
using SpaceFunction = std::function<double(double s)>;
using TimeFunction = std::function<double(double t)>;

/// Convection-diffusion problem with a jump in the initial data:
///
///   -eps u_ss + a(s,t) u_s + b(s,t) u + u_t = f(s,t)   on (0,1) x (0,T]
///
/// with Dirichlet data on s = 0, 1 and an initial condition that is smooth
/// except for a jump at s = d. The initial data is given as two branches so
/// the one-sided values at d never depend on floating-point evaluation at
/// the discontinuity.
///
/// The object is immutable once built; every callback must be pure.
struct ProblemSpec {
    std::string name;

    SpaceTimeFunction convection;  ///< a(s,t), strictly positive
    SpaceTimeFunction reaction;    ///< b(s,t) >= 0; leave empty when identically zero
    SpaceTimeFunction source;      ///< f(s,t)

    SpaceFunction initial_left;   ///< initial data on [0, d]
    SpaceFunction initial_right;  ///< initial data on [d, 1]

    double jump_location = 0.5;  ///< d, in (0,1)
    double final_time = 1.0;     ///< T > 0

    TimeFunction boundary_left;   ///< u(0,t)
    TimeFunction boundary_right;  ///< u(1,t)

    /// Lower bound for the convection coefficient. Empty means "auto":
    /// the minimum over a 101 x 101 sample grid.
    std::optional<double> alpha;

    /// Optional closed-form layer path d(t). When set it replaces the
    /// numerical integration of d'(t) = a(d(t), t).
    TimeFunction exact_characteristic;

    bool has_reaction() const noexcept { return static_cast<bool>(reaction); }
    double reaction_at(double s, double t) const { return reaction ? reaction(s, t) : 0.0; }

    /// [phi](d) = phi(d+) - phi(d-).
    double jump() const { return initial_right(jump_location) - initial_left(jump_location); }
};

/// Convection a = (0.81 - (s-0.2)^2)/4, no reaction, jump of 3 at d = 0.2, T = 0.5.
ProblemSpec make_example1();

/// Convection a = 1 + s^2, reaction b = s + t, jump of 3 at d = 0.1, T = 0.5.
ProblemSpec make_example2();

/// Registry lookup by integer id (1 or 2). Throws InvalidArgument otherwise.
ProblemSpec make_example(int id);

enum class ValidationWarning {
    DerivativeJump,           ///< [phi'](d) != 0
    ConvectionSlopeAtJump,    ///< a_s(d,0) != 0
    ReactionSlopeAtJump,      ///< b_s(d,0) != 0
};

struct ValidationReport {
    double min_convection = 0.0;
    double alpha = 0.0;  ///< resolved lower bound (given, or min_convection when auto)
    double min_reaction = 0.0;
    bool reaction_nonnegative = true;
    double jump = 0.0;
    double derivative_jump = 0.0;
    double convection_slope_at_jump = 0.0;
    double reaction_slope_at_jump = 0.0;
    std::vector<ValidationWarning> warnings;
    std::vector<std::string> messages;  ///< human-readable, parallel to warnings

    bool has_warning(ValidationWarning w) const;
};

/// Samples the coefficients on a grid_density x grid_density grid of [0,1]x[0,T].
/// Throws NonPositiveConvection, NegativeReaction or NonFiniteJump.
ValidationReport validate(const ProblemSpec& problem, int grid_density = 101);

/// Alpha used by the mesh: the explicit value, or the min over a 101x101 grid.
double resolve_alpha(const ProblemSpec& problem);

}  // namespace layertrack
