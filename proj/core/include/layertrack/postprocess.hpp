#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "layertrack/solver.hpp"

namespace layertrack {

/// Cell [nodes[lower], nodes[lower+1]] holding a point, with the local weight
/// of the right end.
struct Bracket {
    int lower = 0;
    double weight = 0.0;
};

/// Binary search on ascending nodes. Throws OutOfRange outside the node span.
Bracket bracket(std::span<const double> nodes, double value);
Bracket bracket(const TimeMesh& mesh, double t);

/// Bilinear interpolant of Y over the mapped space-time mesh.
double bilinear_eval(const DiscreteSolution& solution, double x, double t);

/// u(s,t) = Ybar(x(s,t), t) + 0.5 [phi](d) I(t) psi0_hat(s,t).
double reconstruct_u(const DiscreteSolution& solution, double s, double t);

enum class ExportMode { transformed, physical };

/// Plain (a, b, value) table with '#' metadata lines, as written to CSV.
struct SolutionTable {
    std::vector<std::string> metadata;  ///< lines without the leading "# "
    std::array<std::string, 3> columns{"x", "t", "y"};
    std::vector<std::array<double, 3>> rows;
};

/// transformed: (x_i, t_j, Y_ij) for every node. physical: (s, t_j, u) on a
/// uniform 201-point s grid per time level.
SolutionTable tabulate(const DiscreteSolution& solution, ExportMode mode);

void write_csv(const SolutionTable& table, std::ostream& out);
void write_csv(const SolutionTable& table, const std::filesystem::path& path);
SolutionTable read_csv(std::istream& in);
SolutionTable read_csv(const std::filesystem::path& path);

/// tabulate + write_csv. Throws IoFailure when the file cannot be written.
void export_csv(const DiscreteSolution& solution, ExportMode mode,
                const std::filesystem::path& path);

/// Shortest-exact decimal form used in every CSV this library writes.
std::string format_real(double value);

}  // namespace layertrack
