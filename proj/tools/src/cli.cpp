#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "layertrack/error.hpp"
#include "layertrack/harness.hpp"
#include "layertrack/mesh.hpp"
#include "layertrack/postprocess.hpp"
#include "layertrack/problem.hpp"
#include "layertrack/solver.hpp"

namespace layertrack::cli {

namespace {

struct UsageError {
    std::string message;
};

std::optional<int> parse_int(std::string_view text) {
    int value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

int default_threads() {
    if (const char* env = std::getenv("LAYERTRACK_THREADS")) {
        if (auto n = parse_int(env); n && *n > 0) return *n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Options shared by every subcommand.
struct Common {
    int example = 1;
    std::optional<double> final_time;
};

void add_common(CLI::App& sub, Common& common) {
    sub.add_option("--example", common.example, "Example problem id (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    sub.add_option("--T", common.final_time, "Override the final time")
        ->check(CLI::PositiveNumber);
}

ProblemSpec load_problem(const Common& common) {
    ProblemSpec p = make_example(common.example);
    if (common.final_time) p.final_time = *common.final_time;
    return p;
}

double require_epsilon(const std::string& text) {
    auto eps = parse_epsilon(text);
    if (!eps) throw UsageError{"invalid --eps '" + text + "' (use 2^-k or a decimal in (0,1])"};
    return *eps;
}

void require_cells(int n) {
    if (n < 8 || n % 8 != 0) {
        throw UsageError{"N must be divisible by 8 (got " + std::to_string(n) + ")"};
    }
}

// Writes to --out when given, otherwise to out.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw Error(ErrorCode::IoFailure, "failed writing '" + path + "'");
}

}  // namespace

std::optional<double> parse_epsilon(std::string_view text) {
    double value = 0.0;
    if (text.starts_with("2^")) {
        auto power = parse_int(text.substr(2));
        if (!power) return std::nullopt;
        value = std::ldexp(1.0, *power);
    } else {
        const char* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc{} || ptr != end) return std::nullopt;
    }
    if (!std::isfinite(value) || !(value > 0.0) || value > 1.0) return std::nullopt;
    return value;
}

std::optional<std::vector<int>> parse_power_list(std::string_view text) {
    std::vector<int> powers;
    if (const auto colon = text.find(':'); colon != std::string_view::npos) {
        auto lo = parse_int(text.substr(0, colon));
        auto hi = parse_int(text.substr(colon + 1));
        if (!lo || !hi || *lo < 0 || *hi < *lo) return std::nullopt;
        for (int k = *lo; k <= *hi; ++k) powers.push_back(k);
        return powers;
    }
    auto list = parse_int_list(text);
    if (!list) return std::nullopt;
    for (int k : *list) {
        if (k < 0) return std::nullopt;
    }
    return list;
}

std::optional<std::vector<int>> parse_int_list(std::string_view text) {
    std::vector<int> values;
    for (std::string_view part : split(text, ',')) {
        auto v = parse_int(part);
        if (!v) return std::nullopt;
        values.push_back(*v);
    }
    return values;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Layer-tracking solver for convection-diffusion problems with a jump in the "
                 "initial data"};
    app.name("layertrack");
    app.require_subcommand(1);

    // solve
    Common solve_common;
    std::string solve_eps = "1";
    int solve_cells = 64;
    std::optional<int> solve_steps;
    std::string solve_out;
    bool physical = false;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one (eps, N, M) case and export CSV");
    add_common(*solve_cmd, solve_common);
    solve_cmd->add_option("--eps", solve_eps, "Diffusion parameter, 2^-k or decimal");
    solve_cmd->add_option("--N", solve_cells, "Space cells (divisible by 8)");
    solve_cmd->add_option("--M", solve_steps, "Time steps (default N)");
    solve_cmd->add_option("--out", solve_out, "Output CSV path (default stdout)");
    solve_cmd->add_flag("--physical", physical, "Export u(s,t) on a uniform s grid");

    // converge
    Common conv_common;
    std::string conv_cells = "32,64,128,256";
    std::string conv_powers = "0:26";
    std::optional<int> conv_threads;
    std::string conv_out;
    std::string conv_format = "text";
    bool m_equals_n = false;
    bool no_transform = false;
    auto* conv_cmd = app.add_subcommand("converge", "Two-mesh convergence table over eps and N");
    add_common(*conv_cmd, conv_common);
    conv_cmd->add_option("--N", conv_cells, "Comma-separated N values");
    conv_cmd->add_option("--eps-powers", conv_powers, "k values for eps = 2^-k, as a:b or a,b,c");
    conv_cmd->add_flag("--M-equals-N", m_equals_n, "Use M = N (the default)");
    conv_cmd->add_option("--threads", conv_threads, "Worker threads (default LAYERTRACK_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    conv_cmd->add_option("--format", conv_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv"}));
    conv_cmd->add_option("--out", conv_out, "Output path (default stdout)");
    conv_cmd->add_flag("--no-transform", no_transform, "Reserved; the untransformed scheme is not available");

    // characteristic
    Common char_common;
    int samples = 11;
    std::string char_out;
    auto* char_cmd = app.add_subcommand("characteristic", "Tabulate the layer path d(t) and I(t)");
    add_common(*char_cmd, char_common);
    char_cmd->add_option("--samples", samples, "Number of equally spaced times")
        ->check(CLI::Range(2, 1000000));
    char_cmd->add_option("--out", char_out, "Output CSV path (default stdout)");

    // mesh
    Common mesh_common;
    std::string mesh_eps = "1";
    int mesh_cells = 64;
    std::string mesh_out;
    auto* mesh_cmd = app.add_subcommand("mesh", "Print the Shishkin mesh for one (eps, N)");
    add_common(*mesh_cmd, mesh_common);
    mesh_cmd->add_option("--eps", mesh_eps, "Diffusion parameter, 2^-k or decimal");
    mesh_cmd->add_option("--N", mesh_cells, "Space cells (divisible by 8)");
    mesh_cmd->add_option("--out", mesh_out, "Output CSV path (default stdout)");

    // validate
    Common val_common;
    auto* val_cmd = app.add_subcommand("validate", "Check the problem data and report warnings");
    add_common(*val_cmd, val_common);

    std::vector<const char*> argv{"layertrack"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve_cmd) {
            const double eps = require_epsilon(solve_eps);
            require_cells(solve_cells);
            const int steps = solve_steps.value_or(solve_cells);
            if (steps < 1) throw UsageError{"M must be positive"};
            auto prepared = prepare(load_problem(solve_common));
            const DiscreteSolution sol = solve(prepared, eps, solve_cells, steps);
            const SolutionTable table =
                tabulate(sol, physical ? ExportMode::physical : ExportMode::transformed);
            emit(solve_out, out, [&](std::ostream& os) { write_csv(table, os); });
            return kExitOk;
        }
        if (*conv_cmd) {
            if (no_transform) {
                throw UsageError{"--no-transform is reserved; the untransformed scheme is not implemented"};
            }
            auto cells = parse_int_list(conv_cells);
            if (!cells || cells->empty()) throw UsageError{"invalid --N list '" + conv_cells + "'"};
            for (int n : *cells) require_cells(n);
            if (!std::is_sorted(cells->begin(), cells->end()) ||
                std::adjacent_find(cells->begin(), cells->end()) != cells->end()) {
                throw UsageError{"--N values must be strictly ascending"};
            }
            auto powers = parse_power_list(conv_powers);
            if (!powers || powers->empty()) {
                throw UsageError{"invalid --eps-powers '" + conv_powers + "'"};
            }
            SweepOptions options;
            options.cells = *cells;
            options.eps_powers = *powers;
            options.threads = conv_threads.value_or(default_threads());
            const ConvergenceReport report = epsilon_sweep(load_problem(conv_common), options);
            for (const auto& failure : report.failures) err << "failed: " << failure << '\n';
            const std::string text = render_table(
                report, conv_format == "csv" ? TableFormat::csv : TableFormat::text);
            emit(conv_out, out, [&](std::ostream& os) { os << text; });
            return report.failures.empty() ? kExitOk : kExitNumerical;
        }
        if (*char_cmd) {
            auto prepared = prepare(load_problem(char_common));
            const auto& h = prepared->horizon;
            const double T = prepared->problem.final_time;
            SolutionTable table;
            table.metadata = {"problem=" + prepared->problem.name,
                              "d(T)=" + format_real(prepared->curve->final_position()),
                              "delta=" + format_real(h.delta), "A=" + format_real(h.A),
                              "gamma_condition_lhs=" + format_real(h.gamma_condition_lhs)};
            table.columns = {"t", "d", "I"};
            for (int i = 0; i < samples; ++i) {
                const double t = i + 1 == samples ? T : T * i / (samples - 1);
                table.rows.push_back({t, prepared->curve->position(t), (*prepared->damping)(t)});
            }
            emit(char_out, out, [&](std::ostream& os) { write_csv(table, os); });
            return kExitOk;
        }
        if (*mesh_cmd) {
            const double eps = require_epsilon(mesh_eps);
            require_cells(mesh_cells);
            auto prepared = prepare(load_problem(mesh_common));
            const MeshParameters params = mesh_parameters(*prepared, eps, mesh_cells);
            const SpaceMesh mesh = build_space_mesh(mesh_cells, params.jump_location,
                                                    transition_points(params));
            emit(mesh_out, out, [&](std::ostream& os) {
                os << "# problem=" << prepared->problem.name << '\n'
                   << "# epsilon=" << format_real(eps) << '\n'
                   << "# N=" << mesh_cells << '\n'
                   << "# sigma1=" << format_real(mesh.sigmas().left) << '\n'
                   << "# sigma2=" << format_real(mesh.sigmas().right) << '\n'
                   << "# sigma=" << format_real(mesh.sigmas().boundary) << '\n'
                   << "i,x\n";
                for (int i = 0; i <= mesh.cells(); ++i) {
                    os << i << ',' << format_real(mesh.node(i)) << '\n';
                }
            });
            return kExitOk;
        }
        if (*val_cmd) {
            const ProblemSpec p = load_problem(val_common);
            const ValidationReport r = validate(p);
            auto prepared = prepare(p);
            const auto& h = prepared->horizon;
            out << "problem=" << p.name << '\n'
                << "min_convection=" << format_real(r.min_convection) << '\n'
                << "alpha=" << format_real(prepared->alpha) << '\n'
                << "reaction_nonnegative=" << (r.reaction_nonnegative ? "true" : "false") << '\n'
                << "jump=" << format_real(r.jump) << '\n'
                << "d(T)=" << format_real(prepared->curve->final_position()) << '\n'
                << "delta=" << format_real(h.delta) << '\n'
                << "A=" << format_real(h.A) << '\n'
                << "gamma_condition_lhs=" << format_real(h.gamma_condition_lhs) << '\n'
                << "gamma_condition_ok=" << (h.gamma_condition_ok ? "true" : "false") << '\n';
            for (const auto& m : r.messages) out << "warning: " << m << '\n';
            return kExitOk;
        }
    } catch (const UsageError& e) {
        const auto parsed = app.get_subcommands();
        err << "error: " << e.message << "\n\n"
            << (parsed.empty() ? app.help() : parsed.front()->help());
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace layertrack::cli
