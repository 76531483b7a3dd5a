#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swipt::cli {

/// Runs the `swipt` command line. `args` excludes the program name. Returns
/// the process exit code: 0 success (including a valid "infeasible" answer),
/// 1 numeric failure, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swipt::cli
