#pragma once

#include <memory>

#include "layertrack/characteristic.hpp"
#include "layertrack/problem.hpp"

namespace layertrack {

enum class Side { left, right };

/// Side of the fixed interface x = d that x belongs to; x == d counts as left.
inline Side side_of(double x, double d) noexcept { return x <= d ? Side::left : Side::right; }

/// psi_d(x): (d - x)/d on the left, (x - d)/(1 - d) on the right.
double layer_weight(double x, double d, Side side) noexcept;

/// The piecewise-linear map frozen at one time level. Caches d(t).
struct MapSlice {
    double d0;        ///< fixed interface in mapped coordinates
    double position;  ///< d(t)

    double forward(double s) const noexcept;
    double inverse(double x) const noexcept;
    /// ds/dx on the given side, i.e. sqrt(g).
    double stretch(Side side) const noexcept;
    /// g = stretch^2.
    double metric(Side side) const noexcept;
};

/// Map (s,t) -> (x,t) that pins the layer path d(t) to the line x = d.
class TransformContext {
public:
    explicit TransformContext(std::shared_ptr<const CharacteristicCurve> curve);

    MapSlice at(double t) const;

    double forward_map(double s, double t) const;
    double inverse_map(double x, double t) const;
    double metric_g(Side side, double t) const;

    /// kappa(x,t) = sqrt(g) (a(x,t) + a(d,t)(psi_d(x) - 1)); the side selects the
    /// one-sided limit when x == d.
    double convection_kappa(const ProblemSpec& problem, double x, double t, Side side) const;
    double convection_kappa(const ProblemSpec& problem, double x, double t) const;

    double jump_location() const noexcept { return d0_; }
    const CharacteristicCurve& curve() const noexcept { return *curve_; }
    const std::shared_ptr<const CharacteristicCurve>& curve_ptr() const noexcept { return curve_; }

private:
    std::shared_ptr<const CharacteristicCurve> curve_;
    double d0_;
};

}  // namespace layertrack
