// Entry point of the salz command-line tool, callable in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace salz::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

/// Runs one command. args excludes the program name. Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace salz::cli
