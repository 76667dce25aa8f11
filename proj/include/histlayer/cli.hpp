#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace histlayer {

/// Runs one CLI invocation. `args` excludes the program name.
/// Exit codes: 0 success, 1 validation or usage failure, 2 acceptance threshold missed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace histlayer
