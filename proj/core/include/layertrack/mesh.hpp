#pragma once

#include <array>
#include <span>
#include <vector>

namespace layertrack {

/// Widths of the refined pieces: [d - left, d], [d, d + right], [1 - boundary, 1].
struct TransitionPoints {
    double left = 0.0;      ///< sigma_1
    double right = 0.0;     ///< sigma_2
    double boundary = 0.0;  ///< sigma
};

struct MeshParameters {
    double epsilon = 1.0;
    int cells = 8;               ///< N, divisible by 8
    double jump_location = 0.5;  ///< d
    double final_time = 1.0;     ///< T
    double delta = 1.0;          ///< (1 - d(T)) / (1 - d)
    double alpha = 1.0;          ///< lower bound of the convection
};

/// sigma_1 = min(d/4, 2 sqrt(T eps) ln N)
/// sigma_2 = min(1 - d(T), d/4, 2 sqrt(T eps / delta) ln N)
/// sigma   = min((1 - d - sigma_2)/2, 2 eps / (alpha delta) ln N)
/// Throws InvalidMesh for non-positive widths or an empty middle piece.
TransitionPoints transition_points(const MeshParameters& params);

/// Piecewise-uniform Shishkin mesh on [0,1] with five pieces holding
/// 3N/8 : N/8 : N/8 : N/4 : N/8 cells. Node N/2 is exactly d.
class SpaceMesh {
public:
    static constexpr std::array<int, 5> kPieceEighths = {3, 1, 1, 2, 1};

    SpaceMesh(int cells, double jump_location, TransitionPoints sigmas);

    int cells() const noexcept { return cells_; }
    int interface_index() const noexcept { return cells_ / 2; }
    double jump_location() const noexcept { return breaks_[2]; }
    const TransitionPoints& sigmas() const noexcept { return sigmas_; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    /// h_i = x_i - x_{i-1}, for i in 1..N.
    double step(int i) const { return node(i) - node(i - 1); }

    /// Piece boundaries 0, d - sigma_1, d, d + sigma_2, 1 - sigma, 1.
    const std::array<double, 6>& breaks() const noexcept { return breaks_; }
    /// Index of the piece containing cell i (the cell [x_{i-1}, x_i]).
    int piece_of_cell(int i) const;

private:
    int cells_;
    TransitionPoints sigmas_;
    std::array<double, 6> breaks_;
    std::vector<double> nodes_;
};

SpaceMesh build_space_mesh(int cells, double jump_location, TransitionPoints sigmas);

/// Uniform time levels t_j = j T / M.
class TimeMesh {
public:
    TimeMesh(int steps, double final_time);

    int steps() const noexcept { return steps_; }
    double final_time() const noexcept { return final_time_; }
    double step() const noexcept { return final_time_ / steps_; }
    double node(int j) const noexcept { return j == steps_ ? final_time_ : final_time_ * j / steps_; }
    std::vector<double> nodes() const;

private:
    int steps_;
    double final_time_;
};

}  // namespace layertrack
