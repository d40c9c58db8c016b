#include "layertrack/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "layertrack/error.hpp"
#include "uniform_grid.hpp"

namespace layertrack {

namespace {

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

constexpr int kMaxPanelDoublings = 8;

}  // namespace

double erfc(double z) { return std::erfc(z); }

double safe_exp(double arg) noexcept { return arg < -745.0 ? 0.0 : std::exp(arg); }

DampingFactor::DampingFactor(const ProblemSpec& problem,
                             std::shared_ptr<const CharacteristicCurve> curve, double tolerance,
                             int initial_panels)
    : reaction_(problem.reaction), curve_(std::move(curve)), final_time_(problem.final_time) {
    if (!reaction_) {
        cumulative_ = {0.0, 0.0};
        return;
    }
    int panels = std::max(initial_panels, 1);
    std::vector<double> coarse = cumulative_for(panels);
    for (int r = 0; r < kMaxPanelDoublings; ++r) {
        std::vector<double> fine = cumulative_for(2 * panels);
        double change = 0.0;
        for (int k = 0; k <= panels; ++k) {
            change = std::max(change, std::abs(fine[2 * k] - coarse[k]));
        }
        coarse = std::move(fine);
        panels *= 2;
        if (change < tolerance) {
            break;
        }
    }
    cumulative_ = std::move(coarse);
}

double DampingFactor::panel_integral(double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
        const double r = mid + half * kGaussNodes[q];
        sum += kGaussWeights[q] * reaction_(curve_->position(r), r);
    }
    return half * sum;
}

std::vector<double> DampingFactor::cumulative_for(int panels) const {
    std::vector<double> cumulative(static_cast<std::size_t>(panels) + 1, 0.0);
    for (int k = 0; k < panels; ++k) {
        const double a = detail::uniform_node(final_time_, k, panels);
        const double b = detail::uniform_node(final_time_, k + 1, panels);
        cumulative[k + 1] = cumulative[k] + panel_integral(a, b);
    }
    return cumulative;
}

double DampingFactor::operator()(double t) const {
    if (!(t >= 0.0 && t <= final_time_)) {
        throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " outside [0, T]");
    }
    if (!reaction_ || t == 0.0) {
        return 1.0;
    }
    const int panels = this->panels();
    const double width = final_time_ / panels;
    auto k = std::min(static_cast<int>(t / width), panels - 1);
    const double left = detail::uniform_node(final_time_, k, panels);
    double integral = cumulative_[k];
    if (t > left) {
        integral += panel_integral(left, t);
    }
    return std::exp(-integral);
}

SingularContext::SingularContext(double epsilon, TransformContext transform,
                                 std::shared_ptr<const DampingFactor> damping)
    : epsilon_(epsilon), transform_(std::move(transform)), damping_(std::move(damping)) {
    if (!(epsilon_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
}

double SingularContext::psi0_hat(double s, double t) const {
    const double d = transform_.jump_location();
    if (t == 0.0) {
        if (s < d) return 0.0;
        if (s > d) return 2.0;
        return 1.0;
    }
    const double position = transform_.curve().position(t);
    return erfc((position - s) / (2.0 * std::sqrt(epsilon_ * t)));
}

double SingularContext::exp_transformed(double x, double t) const {
    const double d = transform_.jump_location();
    if (t == 0.0) {
        return x == d ? 1.0 : 0.0;
    }
    const double g = transform_.metric_g(side_of(x, d), t);
    return safe_exp(-g * (d - x) * (d - x) / (4.0 * epsilon_ * t));
}

std::array<double, 5> SingularContext::psi_family(double x, double t) const {
    const double d = transform_.jump_location();
    std::array<double, 5> psi{};
    if (t == 0.0) {
        if (x > d) {
            double power = 1.0;
            for (int n = 0; n < 5; ++n) {
                psi[n] = 2.0 * power;
                power *= d - x;
            }
        } else if (x == d) {
            psi[0] = 1.0;
        }
        return psi;
    }
    const MapSlice slice = transform_.at(t);
    const double offset = slice.stretch(side_of(x, d)) * (d - x);  // = d(t) - s
    const double et = epsilon_ * t;
    const double root = std::sqrt(et);
    const double E = safe_exp(-offset * offset / (4.0 * et));

    psi[0] = erfc(offset / (2.0 * root));
    psi[1] = offset * psi[0] - 2.0 * root / std::sqrt(std::numbers::pi) * E;
    for (int k = 2; k < 5; ++k) {
        psi[k] = offset * psi[k - 1] + 2.0 * et * (k - 1) * psi[k - 2];
    }
    return psi;
}

double SingularContext::psi_transformed(int k, double x, double t) const {
    if (k < 0 || k > 4) {
        throw Error(ErrorCode::InvalidArgument, "singular function index must be in 0..4");
    }
    return psi_family(x, t)[static_cast<std::size_t>(k)];
}

}  // namespace layertrack
