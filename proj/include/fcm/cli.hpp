#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcm::cli {

/// Exit codes: 0 success (including non-convergence), 1 bad input or usage,
/// 2 numerical failure.
int run(int argc, char** argv);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcm::cli
