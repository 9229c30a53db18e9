#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lyapdisp::cli {

enum ExitCode : int { kOk = 0, kComputationError = 1, kUsageError = 2, kVerificationFailure = 3 };

/// args excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lyapdisp::cli
