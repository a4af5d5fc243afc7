#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aicg/geometry.hpp"

namespace aicg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one subcommand. Output goes to --out when given, else `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// 17 significant digits, '.' decimal point, "nan"/"inf" for non-finite values.
std::string format_number(double v);

/// FNV-1a 64-bit hash rendered as 16 hex digits.
std::string settings_hash(const std::string& canonical);

/// "2pi", "0.5pi", "pi" or plain radians.
double parse_angle(const std::string& text);
std::vector<double> parse_angles(const std::string& text);

/// "n1,n2,n3" with nonnegative integers.
Counts parse_counts(const std::string& text);

}  // namespace aicg::cli
