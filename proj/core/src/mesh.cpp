#include "layertrack/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "layertrack/error.hpp"

namespace layertrack {

namespace {

void require_cells(int cells) {
    if (cells < 8 || cells % 8 != 0) {
        throw Error(ErrorCode::InvalidMesh, "N must be divisible by 8 (got " +
                                                std::to_string(cells) + ")");
    }
}

}  // namespace

TransitionPoints transition_points(const MeshParameters& p) {
    require_cells(p.cells);
    if (!(p.epsilon > 0.0) || !(p.delta > 0.0 && p.delta < 1.0 + 1e-15) || !(p.alpha > 0.0) ||
        !(p.final_time > 0.0) || !(p.jump_location > 0.0 && p.jump_location < 1.0)) {
        throw Error(ErrorCode::InvalidMesh, "transition points need eps > 0, 0 < delta <= 1, "
                                            "alpha > 0, T > 0, 0 < d < 1");
    }
    const double d = p.jump_location;
    const double log_n = std::log(static_cast<double>(p.cells));
    const double room_right = p.delta * (1.0 - d);  // 1 - d(T)

    TransitionPoints s;
    s.left = std::min(d / 4.0, 2.0 * std::sqrt(p.final_time * p.epsilon) * log_n);
    s.right = std::min({room_right, d / 4.0,
                        2.0 * std::sqrt(p.final_time * p.epsilon / p.delta) * log_n});
    s.boundary = std::min((1.0 - (d + s.right)) / 2.0,
                          2.0 * p.epsilon / (p.alpha * p.delta) * log_n);

    if (!(s.left > 0.0 && s.right > 0.0 && s.boundary > 0.0) ||
        !(d + s.right < 1.0 - s.boundary)) {
        throw Error(ErrorCode::InvalidMesh, "degenerate transition points");
    }
    return s;
}

SpaceMesh::SpaceMesh(int cells, double jump_location, TransitionPoints sigmas)
    : cells_(cells), sigmas_(sigmas) {
    require_cells(cells);
    const double d = jump_location;
    breaks_ = {0.0, d - sigmas.left, d, d + sigmas.right, 1.0 - sigmas.boundary, 1.0};
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
        if (!(breaks_[k] < breaks_[k + 1])) {
            throw Error(ErrorCode::InvalidMesh, "mesh pieces overlap or are empty");
        }
    }

    nodes_.reserve(static_cast<std::size_t>(cells) + 1);
    nodes_.push_back(0.0);
    for (std::size_t k = 0; k < kPieceEighths.size(); ++k) {
        const int count = kPieceEighths[k] * cells / 8;
        // Extended precision so each node is rounded once.
        const long double a = breaks_[k];
        const long double b = breaks_[k + 1];
        for (int i = 1; i < count; ++i) {
            nodes_.push_back(static_cast<double>(a + (b - a) * i / count));
        }
        nodes_.push_back(b);
    }
}

int SpaceMesh::piece_of_cell(int i) const {
    if (i < 1 || i > cells_) {
        throw Error(ErrorCode::OutOfRange, "cell index out of range");
    }
    int upper = 0;
    for (std::size_t k = 0; k < kPieceEighths.size(); ++k) {
        upper += kPieceEighths[k] * cells_ / 8;
        if (i <= upper) return static_cast<int>(k);
    }
    return static_cast<int>(kPieceEighths.size()) - 1;
}

SpaceMesh build_space_mesh(int cells, double jump_location, TransitionPoints sigmas) {
    return SpaceMesh(cells, jump_location, sigmas);
}

TimeMesh::TimeMesh(int steps, double final_time) : steps_(steps), final_time_(final_time) {
    if (steps < 1 || !(final_time > 0.0)) {
        throw Error(ErrorCode::InvalidMesh, "time mesh needs M >= 1 and T > 0");
    }
}

std::vector<double> TimeMesh::nodes() const {
    std::vector<double> out(static_cast<std::size_t>(steps_) + 1);
    for (int j = 0; j <= steps_; ++j) out[j] = node(j);
    return out;
}

}  // namespace layertrack
