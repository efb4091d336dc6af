#pragma once

#include <string>
#include <vector>

namespace stylebreach::cli {

/// Parses and runs one command line (args[0] is the program name).
/// Returns the process exit status; errors are reported on stderr.
int run(const std::vector<std::string>& args);

}  // namespace stylebreach::cli
