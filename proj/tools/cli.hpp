#pragma once

#include <ostream>
#include <span>
#include <string>

namespace mhsteg::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kDataError = 2,
    kDecodeError = 3,
};

/// Runs one invocation. `args[0]` is the program name. Reports go to `out`,
/// diagnostics to `err` as a single "E_CODE: detail" line.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace mhsteg::cli
