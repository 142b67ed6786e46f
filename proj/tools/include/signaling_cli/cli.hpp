#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace signaling::cli {

enum ExitCode { kOk = 0, kVerificationFailed = 1, kInputError = 2, kNumericError = 3 };

// Parses argv-style arguments (without the program name) and runs the command.
// Artifacts go to --out when given, otherwise to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace signaling::cli
