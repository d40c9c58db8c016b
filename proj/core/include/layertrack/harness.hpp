#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "layertrack/solver.hpp"

namespace layertrack {

/// Max |Ybar_coarse - Ybar_fine| over the union of both space-time meshes.
double two_mesh_difference(const DiscreteSolution& coarse, const DiscreteSolution& fine);

/// Solves on (N, M) and (2N, 2M) and compares them.
double two_mesh_difference(std::shared_ptr<const PreparedProblem> prepared, double epsilon,
                           int cells, int steps);

/// log2(coarse / fine). Throws NonPositiveDifference unless both are positive.
double order_from_pair(double coarse, double fine);

struct SweepOptions {
    std::vector<int> cells{32, 64, 128, 256};  ///< ascending N values, each divisible by 8
    std::vector<int> eps_powers;               ///< k with eps = 2^-k; empty means 0..26
    std::function<int(int)> steps_rule;        ///< M from N; empty means M = N
    int threads = 1;
};

/// Differences D[eps][N] and orders P[eps][N] across an (eps, N) grid, plus the
/// eps-uniform rows. Missing or failed entries hold NaN.
struct ConvergenceReport {
    std::string problem_name;
    std::vector<int> cells;
    std::vector<int> eps_powers;
    std::vector<std::vector<double>> differences;  ///< [eps row][N column]
    std::vector<std::vector<double>> orders;
    std::vector<double> uniform_differences;
    std::vector<double> uniform_orders;
    std::vector<std::vector<double>> seconds;  ///< wall time of each cell
    std::vector<std::string> failures;

    static double epsilon_of(int power);
};

ConvergenceReport epsilon_sweep(std::shared_ptr<const PreparedProblem> prepared,
                                const SweepOptions& options);
ConvergenceReport epsilon_sweep(const ProblemSpec& problem, const SweepOptions& options);

/// Fills orders and uniform rows from the differences. Used by the sweep and
/// by the CSV reader.
void complete_report(ConvergenceReport& report);

enum class TableFormat { csv, text };

/// Text mode prints D as 4.546E-02 and orders as 1.570.
/// CSV mode keeps full precision so it parses back exactly.
std::string render_table(const ConvergenceReport& report, TableFormat format);

ConvergenceReport parse_table_csv(std::string_view text);

}  // namespace layertrack
