#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace linecount {

/// Exit codes: 0 success, 1 validation or capacity error, 2 consistency failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConsistency = 2;

/// Parses argv-style arguments (without the program name) and runs one operation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linecount
