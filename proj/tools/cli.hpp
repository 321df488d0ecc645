#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laglift::cli {

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 success, 1 input or validation error, 2 internal invariant violation.
/// Reports go to `out` (or --output); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace laglift::cli
