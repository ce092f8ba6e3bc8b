#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forestlab::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kUsage = 2, kCapExceeded = 3 };

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forestlab::cli
