#include "layertrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "layertrack/error.hpp"
#include "layertrack/postprocess.hpp"

namespace layertrack {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<double> merged_nodes(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Bracket> brackets(std::span<const double> nodes, const std::vector<double>& points) {
    std::vector<Bracket> out;
    out.reserve(points.size());
    for (double p : points) out.push_back(bracket(nodes, p));
    return out;
}

std::vector<Bracket> brackets(const TimeMesh& mesh, const std::vector<double>& points) {
    std::vector<Bracket> out;
    out.reserve(points.size());
    for (double p : points) out.push_back(bracket(mesh, p));
    return out;
}

double interpolate(const DiscreteSolution& sol, const Bracket& bx, const Bracket& bt) {
    const int i = bx.lower;
    const int j = bt.lower;
    const double lo = (1.0 - bx.weight) * sol.value(i, j) + bx.weight * sol.value(i + 1, j);
    const double hi = (1.0 - bx.weight) * sol.value(i, j + 1) + bx.weight * sol.value(i + 1, j + 1);
    return (1.0 - bt.weight) * lo + bt.weight * hi;
}

std::string format_sci(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3E", v);
    return buf;
}

std::string format_order(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string csv_cell(double v) { return std::isnan(v) ? std::string() : format_real(v); }

double csv_value(const std::string& text) {
    if (text.empty()) return kMissing;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw Error(ErrorCode::IoFailure, "cannot parse table value '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

double two_mesh_difference(const DiscreteSolution& coarse, const DiscreteSolution& fine) {
    const std::vector<double> xs = merged_nodes(coarse.space().nodes(), fine.space().nodes());
    const std::vector<double> coarse_t = coarse.time().nodes();
    const std::vector<double> fine_t = fine.time().nodes();
    const std::vector<double> ts = merged_nodes(coarse_t, fine_t);

    const auto cx = brackets(coarse.space().nodes(), xs);
    const auto fx = brackets(fine.space().nodes(), xs);
    const auto ct = brackets(coarse.time(), ts);
    const auto ft = brackets(fine.time(), ts);

    double worst = 0.0;
    for (std::size_t b = 0; b < ts.size(); ++b) {
        for (std::size_t a = 0; a < xs.size(); ++a) {
            const double diff = std::abs(interpolate(coarse, cx[a], ct[b]) - interpolate(fine, fx[a], ft[b]));
            worst = std::max(worst, diff);
        }
    }
    return worst;
}

double two_mesh_difference(std::shared_ptr<const PreparedProblem> prepared, double epsilon,
                           int cells, int steps) {
    const DiscreteSolution coarse = solve(prepared, epsilon, cells, steps);
    const DiscreteSolution fine = solve(prepared, epsilon, 2 * cells, 2 * steps);
    return two_mesh_difference(coarse, fine);
}

double order_from_pair(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) {
        throw Error(ErrorCode::NonPositiveDifference, "orders need two positive differences");
    }
    return std::log2(coarse / fine);
}

double ConvergenceReport::epsilon_of(int power) { return std::ldexp(1.0, -power); }

void complete_report(ConvergenceReport& report) {
    const std::size_t rows = report.eps_powers.size();
    const std::size_t cols = report.cells.size();

    auto finer_column = [&](std::size_t c) -> std::optional<std::size_t> {
        const auto it = std::find(report.cells.begin(), report.cells.end(), 2 * report.cells[c]);
        if (it == report.cells.end()) return std::nullopt;
        return static_cast<std::size_t>(it - report.cells.begin());
    };
    auto order_or_missing = [](double coarse, double fine) {
        return coarse > 0.0 && fine > 0.0 ? std::log2(coarse / fine) : kMissing;
    };

    report.orders.assign(rows, std::vector<double>(cols, kMissing));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (const auto f = finer_column(c)) {
                report.orders[r][c] = order_or_missing(report.differences[r][c], report.differences[r][*f]);
            }
        }
    }

    report.uniform_differences.assign(cols, kMissing);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = report.differences[r][c];
            if (std::isnan(v)) continue;
            double& u = report.uniform_differences[c];
            u = std::isnan(u) ? v : std::max(u, v);
        }
    }
    report.uniform_orders.assign(cols, kMissing);
    for (std::size_t c = 0; c < cols; ++c) {
        if (const auto f = finer_column(c)) {
            report.uniform_orders[c] =
                order_or_missing(report.uniform_differences[c], report.uniform_differences[*f]);
        }
    }
}

ConvergenceReport epsilon_sweep(std::shared_ptr<const PreparedProblem> prepared,
                                const SweepOptions& options) {
    ConvergenceReport report;
    report.problem_name = prepared->problem.name;
    report.cells = options.cells;
    if (!std::is_sorted(report.cells.begin(), report.cells.end())) {
        throw Error(ErrorCode::InvalidArgument, "N list must be ascending");
    }
    for (int n : report.cells) {
        if (n < 8 || n % 8 != 0) {
            throw Error(ErrorCode::InvalidMesh, "N must be divisible by 8 (got " + std::to_string(n) + ")");
        }
    }
    report.eps_powers = options.eps_powers;
    if (report.eps_powers.empty()) {
        for (int k = 0; k <= 26; ++k) report.eps_powers.push_back(k);
    }
    const auto rule = options.steps_rule ? options.steps_rule : [](int n) { return n; };

    const std::size_t rows = report.eps_powers.size();
    const std::size_t cols = report.cells.size();
    report.differences.assign(rows, std::vector<double>(cols, kMissing));
    report.seconds.assign(rows, std::vector<double>(cols, 0.0));
    std::vector<std::vector<std::string>> row_failures(rows);

    auto run_row = [&](std::size_t r) {
        const double eps = ConvergenceReport::epsilon_of(report.eps_powers[r]);
        std::optional<DiscreteSolution> carried;
        for (std::size_t c = 0; c < cols; ++c) {
            const int n = report.cells[c];
            const auto start = std::chrono::steady_clock::now();
            try {
                DiscreteSolution coarse = carried && carried->space().cells() == n &&
                                                  carried->time().steps() == rule(n)
                                              ? std::move(*carried)
                                              : solve(prepared, eps, n, rule(n));
                carried.reset();
                DiscreteSolution fine = solve(prepared, eps, 2 * n, rule(2 * n) );
                report.differences[r][c] = two_mesh_difference(coarse, fine);
                carried.emplace(std::move(fine));
            } catch (const Error& e) {
                carried.reset();
                row_failures[r].push_back("eps=2^-" + std::to_string(report.eps_powers[r]) +
                                          " N=" + std::to_string(n) + ": " + e.what());
            }
            report.seconds[r][c] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };

    const int workers = std::clamp(options.threads, 1, static_cast<int>(std::max<std::size_t>(rows, 1)));
    if (workers == 1) {
        for (std::size_t r = 0; r < rows; ++r) run_row(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < rows; r = next++) run_row(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (auto& f : row_failures) {
        report.failures.insert(report.failures.end(), f.begin(), f.end());
    }
    complete_report(report);
    return report;
}

ConvergenceReport epsilon_sweep(const ProblemSpec& problem, const SweepOptions& options) {
    return epsilon_sweep(prepare(problem), options);
}

std::string render_table(const ConvergenceReport& report, TableFormat format) {
    std::ostringstream out;
    const std::size_t cols = report.cells.size();

    if (format == TableFormat::csv) {
        out << "row,eps_power";
        for (int n : report.cells) out << ",N=M=" << n;
        out << '\n';
        auto emit = [&](const char* kind, const std::string& power, const std::vector<double>& values) {
            out << kind << ',' << power;
            for (double v : values) out << ',' << csv_cell(v);
            out << '\n';
        };
        for (std::size_t r = 0; r < report.eps_powers.size(); ++r) {
            const std::string power = std::to_string(report.eps_powers[r]);
            emit("D", power, report.differences[r]);
            emit("P", power, report.orders[r]);
        }
        if (!report.eps_powers.empty()) {
            emit("uniform_D", "", report.uniform_differences);
            emit("uniform_P", "", report.uniform_orders);
        }
        return out.str();
    }

    constexpr int label_width = 12;
    constexpr int cell_width = 12;
    auto pad = [](std::string s, int width) {
        if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), ' ');
        return s;
    };
    auto label = [](std::string s) {
        s.resize(static_cast<std::size_t>(label_width), ' ');
        return s;
    };

    out << label("");
    for (int n : report.cells) out << pad("N=M=" + std::to_string(n), cell_width);
    out << '\n';
    if (report.eps_powers.empty()) return out.str();

    for (std::size_t r = 0; r < report.eps_powers.size(); ++r) {
        out << label("eps=2^-" + std::to_string(report.eps_powers[r]));
        for (std::size_t c = 0; c < cols; ++c) out << pad(format_sci(report.differences[r][c]), cell_width);
        out << '\n' << label("");
        for (std::size_t c = 0; c < cols; ++c) out << pad(format_order(report.orders[r][c]), cell_width);
        out << '\n';
    }
    out << label("D^{N,M}");
    for (double v : report.uniform_differences) out << pad(format_sci(v), cell_width);
    out << '\n' << label("P^{N,M}");
    for (double v : report.uniform_orders) out << pad(format_order(v), cell_width);
    out << '\n';
    return out.str();
}

ConvergenceReport parse_table_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::IoFailure, "empty convergence table");
    }
    ConvergenceReport report;
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "row" || header[1] != "eps_power") {
        throw Error(ErrorCode::IoFailure, "unexpected table header '" + line + "'");
    }
    for (std::size_t c = 2; c < header.size(); ++c) {
        if (header[c].rfind("N=M=", 0) != 0) {
            throw Error(ErrorCode::IoFailure, "bad column '" + header[c] + "'");
        }
        report.cells.push_back(std::stoi(header[c].substr(4)));
    }
    const std::size_t cols = report.cells.size();
    auto values_of = [&](const std::vector<std::string>& fields) {
        if (fields.size() != cols + 2) {
            throw Error(ErrorCode::IoFailure, "row has " + std::to_string(fields.size()) + " fields");
        }
        std::vector<double> v;
        for (std::size_t c = 2; c < fields.size(); ++c) v.push_back(csv_value(fields[c]));
        return v;
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.empty()) continue;
        if (fields[0] == "D") {
            report.eps_powers.push_back(std::stoi(fields[1]));
            report.differences.push_back(values_of(fields));
        } else if (fields[0] == "P" || fields[0] == "uniform_D" || fields[0] == "uniform_P") {
            values_of(fields);  // derived rows are recomputed below
        } else {
            throw Error(ErrorCode::IoFailure, "unknown row kind '" + fields[0] + "'");
        }
    }
    report.seconds.assign(report.eps_powers.size(), std::vector<double>(cols, 0.0));
    complete_report(report);
    return report;
}

}  // namespace layertrack
