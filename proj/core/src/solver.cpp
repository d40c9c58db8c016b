#include "layertrack/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "layertrack/error.hpp"
#include "uniform_grid.hpp"

namespace layertrack {

namespace {

constexpr double kPivotFloor = 1e-300;

}  // namespace

std::shared_ptr<const PreparedProblem> prepare(ProblemSpec problem,
                                               const IntegrationOptions& options) {
    auto prepared = std::make_shared<PreparedProblem>();
    prepared->curve =
        std::make_shared<const CharacteristicCurve>(integrate_characteristic(problem, options));
    prepared->horizon = horizon_diagnostics(*prepared->curve, problem);
    prepared->alpha = resolve_alpha(problem);
    prepared->damping = std::make_shared<const DampingFactor>(problem, prepared->curve);
    prepared->problem = std::move(problem);
    return prepared;
}

TransformedProblem::TransformedProblem(std::shared_ptr<const PreparedProblem> prepared,
                                       double epsilon)
    : prepared_(std::move(prepared)),
      singular_(epsilon, prepared_->transform(), prepared_->damping),
      jump_(prepared_->problem.jump()) {}

double TransformedProblem::initial_value(double x) const {
    const ProblemSpec& p = prepared_->problem;
    const double d = p.jump_location;
    if (x < d) return p.initial_left(x);
    if (x == d) return p.initial_left(d);
    return p.initial_right(x) - jump_;
}

double TransformedProblem::boundary_value(Boundary side, double t) const {
    const ProblemSpec& p = prepared_->problem;
    const double s = side == Boundary::left ? 0.0 : 1.0;
    const double u = side == Boundary::left ? p.boundary_left(t) : p.boundary_right(t);
    if (jump_ == 0.0) return u;
    return u - 0.5 * jump_ * singular_.damping_I(t) * singular_.psi0_hat(s, t);
}

LevelData TransformedProblem::level(double t) const {
    const ProblemSpec& p = prepared_->problem;
    LevelData out;
    out.t = t;
    out.slice = singular_.transform().at(t);
    out.convection_at_layer = p.convection(out.slice.position, t);
    out.reaction_at_layer = p.reaction_at(out.slice.position, t);
    out.damping = singular_.damping_I(t);
    return out;
}

NodeCoefficients TransformedProblem::coefficients(const LevelData& lv, double x) const {
    const ProblemSpec& p = prepared_->problem;
    const double d = p.jump_location;
    const double t = lv.t;
    const Side side = side_of(x, d);
    const double s = lv.slice.inverse(x);
    const double root_g = lv.slice.stretch(side);
    const double g = root_g * root_g;
    const double a_here = p.convection(s, t);

    NodeCoefficients c;
    c.metric = g;
    c.kappa = root_g * (a_here + lv.convection_at_layer * (layer_weight(x, d, side) - 1.0));

    double forcing = p.source(s, t);
    double extra = 0.0;
    const double b_here = p.has_reaction() ? p.reaction(s, t) : 0.0;
    c.reaction = g * b_here;

    if (jump_ != 0.0 && t > 0.0) {
        const double eps = singular_.epsilon();
        const double offset = root_g * (d - x);  // d(t) - s
        const double E = safe_exp(-offset * offset / (4.0 * eps * t));
        forcing += 0.5 * jump_ * (lv.convection_at_layer - a_here) /
                   std::sqrt(eps * std::numbers::pi * t) * lv.damping * E;
        if (p.has_reaction()) {
            const double psi0 = erfc(offset / (2.0 * std::sqrt(eps * t)));
            extra = 0.5 * jump_ * (lv.reaction_at_layer - b_here) * g * lv.damping * psi0;
        }
    }
    c.rhs = g * forcing + extra;
    return c;
}

double TransformedProblem::rhs_interior(double x, double t) const {
    return coefficients(level(t), x).rhs;
}

TridiagonalSystem assemble_step(const TransformedProblem& problem, const SpaceMesh& mesh,
                                std::span<const double> previous, double t, double k,
                                double left_value, double right_value) {
    const int N = mesh.cells();
    const int mid = mesh.interface_index();
    const double eps = problem.epsilon();
    const auto n = static_cast<std::size_t>(N - 1);

    TridiagonalSystem sys;
    sys.lower.assign(n, 0.0);
    sys.diagonal.assign(n, 0.0);
    sys.upper.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);
    sys.mass.assign(n, 0.0);
    sys.excess.assign(n, 0.0);
    sys.interface_row = mid - 1;

    const LevelData lv = problem.level(t);
    const double d = mesh.jump_location();

    for (int i = 1; i < N; ++i) {
        const auto r = static_cast<std::size_t>(i - 1);
        const double h_left = mesh.step(i);
        const double h_right = mesh.step(i + 1);

        if (i == mid) {
            // Flux continuity [g^{-1/2} D_x Y](d) = 0, negated so the diagonal is positive.
            const double c_left = d / lv.slice.position / h_left;
            const double c_right = (1.0 - d) / (1.0 - lv.slice.position) / h_right;
            sys.lower[r] = -c_left;
            sys.diagonal[r] = c_left + c_right;
            sys.upper[r] = -c_right;
            continue;
        }

        const NodeCoefficients c = problem.coefficients(lv, mesh.node(i));
        const double h_bar = 0.5 * (h_left + h_right);
        const double kappa_plus = std::max(c.kappa, 0.0);
        const double kappa_minus = std::min(c.kappa, 0.0);

        double lower = -eps / (h_bar * h_left) - kappa_plus / h_left;
        double upper = -eps / (h_bar * h_right) + kappa_minus / h_right;
        const double mass = c.metric / k;
        double diag = eps / h_bar * (1.0 / h_left + 1.0 / h_right) + kappa_plus / h_left -
                      kappa_minus / h_right + c.reaction + mass;

        sys.lower[r] = lower;
        sys.diagonal[r] = diag;
        sys.upper[r] = upper;
        sys.mass[r] = mass;
        sys.excess[r] = c.reaction + mass;
        sys.rhs[r] = c.rhs + mass * previous[static_cast<std::size_t>(i)];
    }
    sys.rhs.front() -= sys.lower.front() * left_value;
    sys.rhs.back() -= sys.upper.back() * right_value;

    assert(satisfies_m_matrix_rows(sys));
    return sys;
}

bool satisfies_m_matrix_rows(const TridiagonalSystem& sys) {
    for (std::size_t r = 0; r < sys.size(); ++r) {
        if (static_cast<int>(r) == sys.interface_row) continue;
        const double off = std::abs(sys.lower[r]) + std::abs(sys.upper[r]);
        if (sys.lower[r] > 0.0 || sys.upper[r] > 0.0 || !(sys.diagonal[r] > 0.0)) return false;
        if (sys.diagonal[r] < (off + sys.mass[r]) * (1.0 - 1e-12)) return false;
    }
    return true;
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<double> c_prime(n, 0.0);
    std::vector<double> x(n, 0.0);
    if (n == 0) return x;
    const bool split = sys.excess.size() == n;

    // With the split form, rest = pivot - |upper| is carried alongside the pivot.
    double rest = 0.0;
    double pivot = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        if (split) {
            rest = r == 0 ? sys.excess[0] + std::abs(sys.lower[0])
                          : sys.excess[r] + std::abs(sys.lower[r]) * (rest / pivot);
            pivot = rest + std::abs(sys.upper[r]);
        } else {
            pivot = r == 0 ? sys.diagonal[0] : sys.diagonal[r] - sys.lower[r] * c_prime[r - 1];
        }
        if (std::abs(pivot) < kPivotFloor) {
            throw Error(ErrorCode::SingularSystem, "zero pivot in row " + std::to_string(r));
        }
        c_prime[r] = r + 1 < n ? sys.upper[r] / pivot : 0.0;
        x[r] = (r == 0 ? sys.rhs[0] : sys.rhs[r] - sys.lower[r] * x[r - 1]) / pivot;
    }
    for (std::size_t r = n - 1; r-- > 0;) {
        x[r] -= c_prime[r] * x[r + 1];
    }
    return x;
}

std::vector<double> advance_step(const TransformedProblem& problem, const SpaceMesh& mesh,
                                 std::span<const double> previous, double t, double k) {
    if (!(t > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "time levels after the first need t > 0");
    }
    const double left = problem.boundary_value(Boundary::left, t);
    const double right = problem.boundary_value(Boundary::right, t);
    const TridiagonalSystem sys = assemble_step(problem, mesh, previous, t, k, left, right);
    const std::vector<double> interior = solve_tridiagonal(sys);

    std::vector<double> column(static_cast<std::size_t>(mesh.cells()) + 1);
    column.front() = left;
    std::copy(interior.begin(), interior.end(), column.begin() + 1);
    column.back() = right;
    return column;
}

DiscreteSolution::DiscreteSolution(std::shared_ptr<const PreparedProblem> prepared,
                                   double epsilon, SpaceMesh space, TimeMesh time,
                                   std::vector<double> values, std::vector<double> damping_values)
    : prepared_(std::move(prepared)),
      epsilon_(epsilon),
      space_(std::move(space)),
      time_(std::move(time)),
      stride_(static_cast<std::size_t>(space_.cells()) + 1),
      values_(std::move(values)),
      damping_values_(std::move(damping_values)) {
    if (values_.size() != stride_ * (static_cast<std::size_t>(time_.steps()) + 1)) {
        throw Error(ErrorCode::InvalidArgument, "solution array does not match the meshes");
    }
}

double DiscreteSolution::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double DiscreteSolution::transmission_residual(int j) const {
    const int mid = space_.interface_index();
    const double d = space_.jump_location();
    const double position = prepared_->curve->position(time_.node(j));
    const double forward = (value(mid + 1, j) - value(mid, j)) / space_.step(mid + 1);
    const double backward = (value(mid, j) - value(mid - 1, j)) / space_.step(mid);
    return (1.0 - d) / (1.0 - position) * forward - d / position * backward;
}

MeshParameters mesh_parameters(const PreparedProblem& prepared, double epsilon, int cells) {
    MeshParameters mp;
    mp.epsilon = epsilon;
    mp.cells = cells;
    mp.jump_location = prepared.problem.jump_location;
    mp.final_time = prepared.problem.final_time;
    mp.delta = prepared.horizon.delta;
    mp.alpha = prepared.alpha;
    return mp;
}

DiscreteSolution solve(std::shared_ptr<const PreparedProblem> prepared, double epsilon, int cells,
                       int steps) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    const PreparedProblem& pp = *prepared;
    SpaceMesh space = build_space_mesh(cells, pp.problem.jump_location,
                                       transition_points(mesh_parameters(pp, epsilon, cells)));
    TimeMesh time(steps, pp.problem.final_time);
    TransformedProblem problem(prepared, epsilon);

    const auto stride = static_cast<std::size_t>(cells) + 1;
    std::vector<double> values(stride * (static_cast<std::size_t>(steps) + 1));
    std::vector<double> damping(static_cast<std::size_t>(steps) + 1);

    for (int i = 0; i <= cells; ++i) {
        values[static_cast<std::size_t>(i)] = problem.initial_value(space.node(i));
    }
    damping[0] = 1.0;

    const double k = time.step();
    for (int j = 1; j <= steps; ++j) {
        const double t = time.node(j);
        const std::span<const double> previous(values.data() + (j - 1) * stride, stride);
        const std::vector<double> next = advance_step(problem, space, previous, t, k);
        std::copy(next.begin(), next.end(), values.begin() + static_cast<std::ptrdiff_t>(j * stride));
        damping[static_cast<std::size_t>(j)] = problem.singular().damping_I(t);
    }
    return DiscreteSolution(std::move(prepared), epsilon, std::move(space), time, std::move(values),
                            std::move(damping));
}

DiscreteSolution solve(const ProblemSpec& problem, double epsilon, int cells, int steps) {
    return solve(prepare(problem), epsilon, cells, steps);
}

double stability_bound(const PreparedProblem& prepared, int samples) {
    const ProblemSpec& p = prepared.problem;
    const double d = p.jump_location;
    samples = std::max(samples, 2);
    double f_norm = 0.0;
    double phi_norm = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / (samples - 1);
        phi_norm = std::max(phi_norm, std::abs(s <= d ? p.initial_left(s) : p.initial_right(s)));
        for (int j = 0; j < samples; ++j) {
            const double t = detail::uniform_node(p.final_time, j, samples - 1);
            f_norm = std::max(f_norm, std::abs(p.source(s, t)));
        }
    }
    phi_norm = std::max({phi_norm, std::abs(p.initial_left(d)), std::abs(p.initial_right(d))});
    const double delta = prepared.horizon.delta;
    return prepared.horizon.A / (delta * delta) * (1.0 + f_norm) * p.final_time + phi_norm +
           std::abs(p.jump()) + 1.0;
}

}  // namespace layertrack
