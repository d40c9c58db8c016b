#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace layertrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Accepts "2^-k", "2^k" or a plain decimal. Returns nullopt for anything
/// that is not a finite value in (0, 1].
std::optional<double> parse_epsilon(std::string_view text);

/// "0:26" (inclusive range) or "0,2,4". Returns nullopt on malformed input.
std::optional<std::vector<int>> parse_power_list(std::string_view text);

/// "32,64,128". Returns nullopt on malformed input.
std::optional<std::vector<int>> parse_int_list(std::string_view text);

/// Entry point shared by main() and the tests. args excludes the program
/// name. Data goes to out (or to --out files), diagnostics to err.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace layertrack::cli
