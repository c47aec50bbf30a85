#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;         // usage, parse or I/O failure
inline constexpr int kExitPrecondition = 3;  // degenerate input, metric precondition
inline constexpr int kExitUnconverged = 4;

inline constexpr const char* kReportBanner = "# symmpoint-report v1";

/// Runs one `symmpoint` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symm::cli
