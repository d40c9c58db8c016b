#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "layertrack/characteristic.hpp"
#include "layertrack/mesh.hpp"
#include "layertrack/problem.hpp"
#include "layertrack/singular.hpp"
#include "layertrack/transform.hpp"

namespace layertrack {

/// Everything about a problem that does not depend on eps or the mesh:
/// the layer path, its diagnostics, alpha and the damping factor I(t).
/// Build once and share across solves.
struct PreparedProblem {
    ProblemSpec problem;
    std::shared_ptr<const CharacteristicCurve> curve;
    HorizonDiagnostics horizon;
    double alpha = 0.0;
    std::shared_ptr<const DampingFactor> damping;

    TransformContext transform() const { return TransformContext(curve); }
};

std::shared_ptr<const PreparedProblem> prepare(ProblemSpec problem,
                                               const IntegrationOptions& options = {});

enum class Boundary { left, right };

/// Coefficients of one time level, shared by every node of that level.
struct LevelData {
    double t = 0.0;
    MapSlice slice{};
    double convection_at_layer = 0.0;  ///< a(d,t) = a(d(t), t)
    double reaction_at_layer = 0.0;    ///< b(d,t)
    double damping = 1.0;              ///< I(t)
};

struct NodeCoefficients {
    double kappa = 0.0;
    double metric = 0.0;    ///< g on the node's side
    double reaction = 0.0;  ///< g b, zero without a reaction term
    double rhs = 0.0;       ///< right side of the transformed equation
};

/// The remainder problem y = u - 0.5 [phi](d) I(t) psi0 in mapped
/// coordinates, for one value of eps.
class TransformedProblem {
public:
    TransformedProblem(std::shared_ptr<const PreparedProblem> prepared, double epsilon);

    double epsilon() const noexcept { return singular_.epsilon(); }
    const PreparedProblem& prepared() const noexcept { return *prepared_; }
    const std::shared_ptr<const PreparedProblem>& prepared_ptr() const noexcept { return prepared_; }
    const SingularContext& singular() const noexcept { return singular_; }

    /// y(x,0): phi(x) left of d, phi(d-) at d, phi(x) - [phi](d) right of d.
    double initial_value(double x) const;

    /// u(p,t) - 0.5 [phi](d) I(t) psi0_hat(p,t).
    double boundary_value(Boundary side, double t) const;

    /// Right side at an interior node x != d, t > 0.
    double rhs_interior(double x, double t) const;

    LevelData level(double t) const;
    NodeCoefficients coefficients(const LevelData& level, double x) const;

private:
    std::shared_ptr<const PreparedProblem> prepared_;
    SingularContext singular_;
    double jump_;
};

/// Tridiagonal system over the interior unknowns 1..N-1. lower[0] and
/// upper[n-1] keep the coefficients of the known boundary values (already
/// moved to rhs) so the rows can be inspected; the elimination ignores them.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diagonal;
    std::vector<double> upper;
    std::vector<double> rhs;
    std::vector<double> mass;  ///< g/k per row, zero on the transmission row
    /// diag - |lower| - |upper| (g b + g/k, zero on the transmission row),
    /// kept apart from diagonal so elimination never has to recover it by
    /// cancellation. Optional; see solve_tridiagonal.
    std::vector<double> excess;
    int interface_row = -1;

    std::size_t size() const noexcept { return diagonal.size(); }
};

/// Assembles the implicit upwind step to level t from the previous column.
TridiagonalSystem assemble_step(const TransformedProblem& problem, const SpaceMesh& mesh,
                                std::span<const double> previous, double t, double k,
                                double left_value, double right_value);

/// True when every row except the transmission row has non-positive
/// off-diagonals and diag >= |lower| + |upper| + g/k.
bool satisfies_m_matrix_rows(const TridiagonalSystem& system);

/// Thomas elimination without pivoting. When excess is filled (which needs
/// non-positive off-diagonals) the pivots are formed from positive terms
/// only, which keeps full relative accuracy when g/k is tiny next to the
/// diffusion and convection entries. Throws SingularSystem on a pivot below
/// 1e-300 in magnitude.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& system);

/// One backward-Euler step; returns the full column including boundary nodes.
std::vector<double> advance_step(const TransformedProblem& problem, const SpaceMesh& mesh,
                                 std::span<const double> previous, double t, double k);

/// Grid function Y(x_i, t_j) plus the metadata needed to interpolate it and
/// to rebuild u in physical coordinates.
class DiscreteSolution {
public:
    DiscreteSolution(std::shared_ptr<const PreparedProblem> prepared, double epsilon,
                     SpaceMesh space, TimeMesh time, std::vector<double> values,
                     std::vector<double> damping_values);

    const SpaceMesh& space() const noexcept { return space_; }
    const TimeMesh& time() const noexcept { return time_; }
    double epsilon() const noexcept { return epsilon_; }
    const std::string& problem_name() const noexcept { return prepared_->problem.name; }
    const PreparedProblem& prepared() const noexcept { return *prepared_; }
    const std::shared_ptr<const PreparedProblem>& prepared_ptr() const noexcept { return prepared_; }

    double value(int i, int j) const {
        return values_[static_cast<std::size_t>(j) * stride_ + static_cast<std::size_t>(i)];
    }
    std::span<const double> column(int j) const {
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(j) * stride_, stride_);
    }
    /// I(t_j) for j = 0..M.
    std::span<const double> damping_values() const noexcept { return damping_values_; }

    double max_abs() const;

    /// ((1-d)/(1-d(t_j))) D+ Y - (d/d(t_j)) D- Y at the interface node.
    double transmission_residual(int j) const;

private:
    std::shared_ptr<const PreparedProblem> prepared_;
    double epsilon_;
    SpaceMesh space_;
    TimeMesh time_;
    std::size_t stride_;
    std::vector<double> values_;
    std::vector<double> damping_values_;
};

MeshParameters mesh_parameters(const PreparedProblem& prepared, double epsilon, int cells);

DiscreteSolution solve(std::shared_ptr<const PreparedProblem> prepared, double epsilon, int cells,
                       int steps);
DiscreteSolution solve(const ProblemSpec& problem, double epsilon, int cells, int steps);

/// (A/delta^2)(1 + ||f||) T + ||phi|| + |[phi](d)| + 1 with sampled norms.
double stability_bound(const PreparedProblem& prepared, int samples = 101);

}  // namespace layertrack
