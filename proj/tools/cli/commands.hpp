#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace proxyrank::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,  // unreadable or invalid input files, config parse errors
  kSpecError = 2,   // bad flags, inconsistent exercise spec, missing coverage
};

// Runs one command line (without the program name). Reports go to files under --out;
// progress and diagnostics go to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxyrank::cli
