#include "layertrack/transform.hpp"

#include <cmath>
#include <string>

#include "layertrack/error.hpp"

namespace layertrack {

namespace {

void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, std::string(what) + " = " + std::to_string(v) +
                                               " outside [0, 1]");
    }
}

}  // namespace

double layer_weight(double x, double d, Side side) noexcept {
    return side == Side::left ? (d - x) / d : (x - d) / (1.0 - d);
}

double MapSlice::forward(double s) const noexcept {
    if (s == position) return d0;
    if (s < position) return d0 / position * s;
    return 1.0 - (1.0 - d0) / (1.0 - position) * (1.0 - s);
}

double MapSlice::inverse(double x) const noexcept {
    if (x == d0) return position;
    if (x < d0) return position / d0 * x;
    return 1.0 - (1.0 - position) / (1.0 - d0) * (1.0 - x);
}

double MapSlice::stretch(Side side) const noexcept {
    return side == Side::left ? position / d0 : (1.0 - position) / (1.0 - d0);
}

double MapSlice::metric(Side side) const noexcept {
    const double r = stretch(side);
    return r * r;
}

TransformContext::TransformContext(std::shared_ptr<const CharacteristicCurve> curve)
    : curve_(std::move(curve)), d0_(curve_->start()) {}

MapSlice TransformContext::at(double t) const { return MapSlice{d0_, curve_->position(t)}; }

double TransformContext::forward_map(double s, double t) const {
    require_unit(s, "s");
    return at(t).forward(s);
}

double TransformContext::inverse_map(double x, double t) const {
    require_unit(x, "x");
    return at(t).inverse(x);
}

double TransformContext::metric_g(Side side, double t) const { return at(t).metric(side); }

double TransformContext::convection_kappa(const ProblemSpec& problem, double x, double t,
                                          Side side) const {
    const MapSlice slice = at(t);
    const double a_here = problem.convection(slice.inverse(x), t);
    const double a_layer = problem.convection(slice.position, t);
    return slice.stretch(side) * (a_here + a_layer * (layer_weight(x, d0_, side) - 1.0));
}

double TransformContext::convection_kappa(const ProblemSpec& problem, double x, double t) const {
    return convection_kappa(problem, x, t, side_of(x, d0_));
}

}  // namespace layertrack
