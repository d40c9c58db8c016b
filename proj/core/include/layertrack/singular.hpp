#pragma once

#include <array>
#include <memory>
#include <vector>

#include "layertrack/characteristic.hpp"
#include "layertrack/problem.hpp"
#include "layertrack/transform.hpp"

namespace layertrack {

/// Complementary error function.
double erfc(double z);

/// exp(arg), returning exactly 0 once arg < -745.
double safe_exp(double arg) noexcept;

/// I(t) = exp(-int_0^t b(d(r), r) dr), the decay of the jump along the layer
/// path. Built once from composite 5-point Gauss-Legendre on uniform panels,
/// doubling the panel count until the cumulative integrals agree to the
/// tolerance. Identically 1 when the problem has no reaction term.
class DampingFactor {
public:
    DampingFactor(const ProblemSpec& problem, std::shared_ptr<const CharacteristicCurve> curve,
                  double tolerance = 1e-12, int initial_panels = 256);

    /// Throws OutOfRange outside [0, T].
    double operator()(double t) const;

    bool trivial() const noexcept { return !reaction_; }
    int panels() const noexcept { return static_cast<int>(cumulative_.size()) - 1; }

private:
    double panel_integral(double a, double b) const;
    std::vector<double> cumulative_for(int panels) const;

    SpaceTimeFunction reaction_;
    std::shared_ptr<const CharacteristicCurve> curve_;
    double final_time_;
    std::vector<double> cumulative_;  ///< integral up to each panel boundary
};

/// The error-function singularity and its weakly singular companions
/// psi_1..psi_4 for a fixed diffusion parameter.
class SingularContext {
public:
    SingularContext(double epsilon, TransformContext transform,
                    std::shared_ptr<const DampingFactor> damping);

    double epsilon() const noexcept { return epsilon_; }
    const TransformContext& transform() const noexcept { return transform_; }

    /// erfc((d(t) - s) / (2 sqrt(eps t))). At t = 0 the one-sided limits are
    /// returned: 0 for s < d, 1 at s = d, 2 for s > d.
    double psi0_hat(double s, double t) const;

    /// E(x,t) = exp(-g (d - x)^2 / (4 eps t)) in mapped coordinates.
    double exp_transformed(double x, double t) const;

    /// psi_k(x,t) for k = 0..4 in mapped coordinates.
    double psi_transformed(int k, double x, double t) const;

    /// All five functions at once; cheaper than five separate calls.
    std::array<double, 5> psi_family(double x, double t) const;

    double damping_I(double t) const { return (*damping_)(t); }
    const DampingFactor& damping() const noexcept { return *damping_; }

private:
    double epsilon_;
    TransformContext transform_;
    std::shared_ptr<const DampingFactor> damping_;
};

}  // namespace layertrack
