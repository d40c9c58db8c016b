#include "layertrack/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "layertrack/error.hpp"

namespace layertrack {

namespace {

constexpr int kPhysicalSamples = 201;

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoFailure, "cannot parse number '" + text + "'");
    }
    if (used != text.size()) {
        throw Error(ErrorCode::IoFailure, "trailing characters in number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Bracket bracket(std::span<const double> nodes, double value) {
    if (nodes.size() < 2 || !(value >= nodes.front() && value <= nodes.back())) {
        throw Error(ErrorCode::OutOfRange, "point " + format_real(value) + " outside the mesh");
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), value);
    auto lower = static_cast<int>(it - nodes.begin()) - 1;
    lower = std::clamp(lower, 0, static_cast<int>(nodes.size()) - 2);
    const double a = nodes[static_cast<std::size_t>(lower)];
    const double b = nodes[static_cast<std::size_t>(lower) + 1];
    return {lower, (value - a) / (b - a)};
}

Bracket bracket(const TimeMesh& mesh, double t) {
    if (!(t >= 0.0 && t <= mesh.final_time())) {
        throw Error(ErrorCode::OutOfRange, "time " + format_real(t) + " outside [0, T]");
    }
    const int M = mesh.steps();
    int lower = std::min(static_cast<int>(t / mesh.step()), M - 1);
    while (lower > 0 && mesh.node(lower) > t) --lower;
    while (lower < M - 1 && mesh.node(lower + 1) <= t) ++lower;
    const double a = mesh.node(lower);
    const double b = mesh.node(lower + 1);
    return {lower, (t - a) / (b - a)};
}

double bilinear_eval(const DiscreteSolution& solution, double x, double t) {
    const Bracket bx = bracket(solution.space().nodes(), x);
    const Bracket bt = bracket(solution.time(), t);
    const int i = bx.lower;
    const int j = bt.lower;
    const double at_lower = (1.0 - bx.weight) * solution.value(i, j) + bx.weight * solution.value(i + 1, j);
    const double at_upper =
        (1.0 - bx.weight) * solution.value(i, j + 1) + bx.weight * solution.value(i + 1, j + 1);
    return (1.0 - bt.weight) * at_lower + bt.weight * at_upper;
}

double reconstruct_u(const DiscreteSolution& solution, double s, double t) {
    const PreparedProblem& pp = solution.prepared();
    const TransformContext transform = pp.transform();
    const double x = transform.forward_map(s, t);
    const double y = bilinear_eval(solution, x, t);
    const double jump = pp.problem.jump();
    if (jump == 0.0) return y;
    const SingularContext singular(solution.epsilon(), transform, pp.damping);
    return y + 0.5 * jump * singular.damping_I(t) * singular.psi0_hat(s, t);
}

SolutionTable tabulate(const DiscreteSolution& solution, ExportMode mode) {
    const PreparedProblem& pp = solution.prepared();
    const int N = solution.space().cells();
    const int M = solution.time().steps();

    SolutionTable table;
    table.metadata = {
        "problem=" + solution.problem_name(),
        "mode=" + std::string(mode == ExportMode::transformed ? "transformed" : "physical"),
        "epsilon=" + format_real(solution.epsilon()),
        "N=" + std::to_string(N),
        "M=" + std::to_string(M),
        "d(T)=" + format_real(pp.curve->final_position()),
        "delta=" + format_real(pp.horizon.delta),
    };

    if (mode == ExportMode::transformed) {
        table.columns = {"x", "t", "y"};
        table.rows.reserve(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(M + 1));
        for (int j = 0; j <= M; ++j) {
            for (int i = 0; i <= N; ++i) {
                table.rows.push_back({solution.space().node(i), solution.time().node(j),
                                      solution.value(i, j)});
            }
        }
    } else {
        table.columns = {"s", "t", "u"};
        table.rows.reserve(static_cast<std::size_t>(kPhysicalSamples) * static_cast<std::size_t>(M + 1));
        for (int j = 0; j <= M; ++j) {
            const double t = solution.time().node(j);
            for (int i = 0; i < kPhysicalSamples; ++i) {
                const double s = static_cast<double>(i) / (kPhysicalSamples - 1);
                table.rows.push_back({s, t, reconstruct_u(solution, s, t)});
            }
        }
    }
    return table;
}

void write_csv(const SolutionTable& table, std::ostream& out) {
    for (const auto& line : table.metadata) out << "# " << line << '\n';
    out << table.columns[0] << ',' << table.columns[1] << ',' << table.columns[2] << '\n';
    for (const auto& row : table.rows) {
        out << format_real(row[0]) << ',' << format_real(row[1]) << ',' << format_real(row[2])
            << '\n';
    }
}

void write_csv(const SolutionTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    write_csv(table, out);
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
    }
}

SolutionTable read_csv(std::istream& in) {
    SolutionTable table;
    table.rows.clear();
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            table.metadata.push_back(line.substr(2));
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw Error(ErrorCode::IoFailure, "expected 3 fields in '" + line + "'");
        }
        if (!have_columns) {
            table.columns = {fields[0], fields[1], fields[2]};
            have_columns = true;
            continue;
        }
        table.rows.push_back({parse_real(fields[0]), parse_real(fields[1]), parse_real(fields[2])});
    }
    if (!have_columns) {
        throw Error(ErrorCode::IoFailure, "missing column header");
    }
    return table;
}

SolutionTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    return read_csv(in);
}

void export_csv(const DiscreteSolution& solution, ExportMode mode,
                const std::filesystem::path& path) {
    write_csv(tabulate(solution, mode), path);
}

}  // namespace layertrack
