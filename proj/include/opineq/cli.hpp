#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "opineq/matrix.hpp"

namespace opineq {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Runs the tool on `args` (program name excluded), writing to the given
/// streams instead of the process ones. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "2", "-1.5", "i", "-2i", "1+1i", "1-0.5j", "1,1" (re,im).
std::optional<Complex> parse_complex(std::string_view text);

}  // namespace opineq
