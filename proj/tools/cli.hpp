#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arithreg::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kResource = 3,
  kInternal = 4,
};

/// Runs one command; argv[0] is the program name. Reports go to --out or to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arithreg::cli
