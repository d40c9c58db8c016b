#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "layertrack/error.hpp"
#include "layertrack/postprocess.hpp"
#include "oracles.hpp"

using namespace layertrack;

namespace {

// Y sampled from q on the nodes of an Example 1 mesh.
template <typename Q>
DiscreteSolution sampled(const Q& q, int N, int M) {
    auto pp = prepare(make_example1());
    const double eps = std::ldexp(1.0, -10);
    SpaceMesh space = build_space_mesh(N, 0.2, transition_points(mesh_parameters(*pp, eps, N)));
    TimeMesh time(M, 0.5);
    std::vector<double> values;
    for (int j = 0; j <= M; ++j) {
        for (int i = 0; i <= N; ++i) values.push_back(q(space.node(i), time.node(j)));
    }
    return DiscreteSolution(pp, eps, std::move(space), std::move(time), std::move(values),
                            std::vector<double>(static_cast<std::size_t>(M + 1), 1.0));
}

std::string to_text(const SolutionTable& table) {
    std::ostringstream out;
    write_csv(table, out);
    return out.str();
}

}  // namespace

TEST_CASE("bracket") {
    const std::vector<double> nodes{0.0, 0.25, 0.5, 1.0};
    CHECK(bracket(nodes, 0.0).lower == 0);
    CHECK(bracket(nodes, 0.25).lower == 1);
    CHECK(bracket(nodes, 1.0).lower == 2);
    CHECK(bracket(nodes, 1.0).weight == 1.0);
    CHECK(bracket(nodes, 0.75).weight == 0.5);
    CHECK_THROWS_AS(bracket(nodes, 1.0000001), Error);
}

TEST_CASE("interpolant is exact at nodes") {
    const DiscreteSolution sol = solve(make_example1(), std::ldexp(1.0, -6), 32, 16);
    for (int j = 0; j <= 16; ++j) {
        for (int i = 0; i <= 32; ++i) {
            CHECK(bilinear_eval(sol, sol.space().node(i), sol.time().node(j)) == sol.value(i, j));
        }
    }
}

TEST_CASE("cell centre is the corner mean") {
    const DiscreteSolution sol = solve(make_example2(), std::ldexp(1.0, -6), 32, 16);
    for (int j : {0, 7, 15}) {
        for (int i : {0, 12, 16, 31}) {
            const double x = 0.5 * (sol.space().node(i) + sol.space().node(i + 1));
            const double t = 0.5 * (sol.time().node(j) + sol.time().node(j + 1));
            const double mean =
                0.25 * (sol.value(i, j) + sol.value(i + 1, j) + sol.value(i, j + 1) + sol.value(i + 1, j + 1));
            CHECK(bilinear_eval(sol, x, t) == doctest::Approx(mean).epsilon(1e-14));
        }
    }
}

TEST_CASE("bilinear data is reproduced") {
    const auto q = [](double x, double t) { return 2.0 * x + 3.0 * t; };
    const DiscreteSolution sol = sampled(q, 64, 10);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const double x = unit(rng);
        const double t = 0.5 * unit(rng);
        CHECK(bilinear_eval(sol, x, t) == doctest::Approx(q(x, t)).epsilon(1e-13));
    }
}

TEST_CASE("interpolant stays within its cell corners") {
    const DiscreteSolution sol = solve(make_example1(), std::ldexp(1.0, -12), 64, 32);
    const auto& nodes = sol.space().nodes();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < 1000; ++n) {
        const double x = unit(rng);
        const double t = 0.5 * unit(rng);
        const Bracket bx = bracket(nodes, x);
        const Bracket bt = bracket(sol.time(), t);
        const double corners[] = {sol.value(bx.lower, bt.lower), sol.value(bx.lower + 1, bt.lower),
                                  sol.value(bx.lower, bt.lower + 1), sol.value(bx.lower + 1, bt.lower + 1)};
        const double v = bilinear_eval(sol, x, t);
        CHECK(v >= *std::min_element(std::begin(corners), std::end(corners)) - 1e-15);
        CHECK(v <= *std::max_element(std::begin(corners), std::end(corners)) + 1e-15);
    }
}

TEST_CASE("reconstruction without a jump is plain interpolation") {
    ProblemSpec p = make_example2();
    p.initial_right = [](double) { return -2.0; };
    p.boundary_right = [](double) { return -2.0; };
    const DiscreteSolution sol = solve(p, std::ldexp(1.0, -8), 32, 16);
    const TransformContext transform = sol.prepared().transform();
    for (double s : {0.0, 0.05, 0.3, 0.77, 1.0}) {
        for (double t : {0.0, 0.2, 0.5}) {
            CHECK(reconstruct_u(sol, s, t) == bilinear_eval(sol, transform.forward_map(s, t), t));
        }
    }
}

TEST_CASE("reconstruction recovers the boundary data at s = 1") {
    const DiscreteSolution sol = solve(make_example1(), std::ldexp(1.0, -8), 64, 32);
    for (int j = 1; j <= 32; ++j) {
        CHECK(reconstruct_u(sol, 1.0, sol.time().node(j)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("reconstruction adds 3 I far right of the layer") {
    const double eps = std::ldexp(1.0, -20);
    const DiscreteSolution sol = solve(make_example1(), eps, 64, 32);
    const TransformContext transform = sol.prepared().transform();
    for (double s : {0.5, 0.8, 0.95}) {
        for (double t : {0.1, 0.5}) {
            const double y = bilinear_eval(sol, transform.forward_map(s, t), t);
            CHECK(reconstruct_u(sol, s, t) - y == doctest::Approx(3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("reconstruction at t = 0 returns the initial data") {
    const DiscreteSolution sol = solve(make_example1(), std::ldexp(1.0, -8), 64, 32);
    const double d = sol.prepared().problem.jump_location;
    for (int i = 0; i <= 64; ++i) {
        const double s = sol.space().node(i);
        if (s == d) continue;
        CHECK(reconstruct_u(sol, s, 0.0) == (s < d ? -2.0 : 1.0));
    }
}

TEST_CASE("tabulated row counts") {
    const DiscreteSolution sol = solve(make_example1(), std::ldexp(1.0, -12), 64, 40);
    const SolutionTable y = tabulate(sol, ExportMode::transformed);
    CHECK(y.rows.size() == 65u * 41u);
    CHECK(y.columns[0] == "x");
    const SolutionTable u = tabulate(sol, ExportMode::physical);
    CHECK(u.rows.size() == 201u * 41u);
    CHECK(u.columns[0] == "s");
    CHECK(u.rows[200][0] == 1.0);

    const std::string text = to_text(y);
    std::size_t comments = 0;
    std::size_t lines = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line); ++lines) {
        if (line.starts_with("#")) ++comments;
    }
    CHECK(lines == comments + 1 + 65u * 41u);
    for (const char* key : {"epsilon=", "N=64", "M=40", "problem=example1", "d(T)=", "delta="}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_CASE("CSV round trip is byte identical") {
    const DiscreteSolution sol = solve(make_example2(), std::ldexp(1.0, -17), 32, 16);
    for (ExportMode mode : {ExportMode::transformed, ExportMode::physical}) {
        const SolutionTable table = tabulate(sol, mode);
        const std::string first = to_text(table);
        std::istringstream in(first);
        const SolutionTable back = read_csv(in);
        CHECK(back.rows == table.rows);
        CHECK(to_text(back) == first);
    }

    const auto path = std::filesystem::temp_directory_path() / "layertrack_roundtrip.csv";
    export_csv(sol, ExportMode::transformed, path);
    const SolutionTable from_file = read_csv(path);
    CHECK(to_text(from_file) == to_text(tabulate(sol, ExportMode::transformed)));
    std::filesystem::remove(path);
}

TEST_CASE("format_real keeps every bit") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (int n = 0; n < 1000; ++n) {
        const double v = dist(rng) * std::ldexp(1.0, n % 60 - 30);
        CHECK(std::stod(format_real(v)) == v);
    }
}

TEST_CASE("errors") {
    const DiscreteSolution sol = solve(make_example1(), 1.0, 32, 8);
    const auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code_of([&] { bilinear_eval(sol, 1.5, 0.1); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { bilinear_eval(sol, 0.5, -0.1); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { reconstruct_u(sol, 0.5, 0.6); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { export_csv(sol, ExportMode::transformed, "/nonexistent-dir/out.csv"); }) ==
          ErrorCode::IoFailure);
    CHECK(code_of([&] { read_csv(std::filesystem::path("/nonexistent-dir/in.csv")); }) ==
          ErrorCode::IoFailure);
    std::istringstream bad("x,t,y\n1,2\n");
    CHECK(code_of([&] { read_csv(bad); }) == ErrorCode::IoFailure);
}
