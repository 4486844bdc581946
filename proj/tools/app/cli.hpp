#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hglass::app {

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hglass::app
