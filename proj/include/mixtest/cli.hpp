#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixtest::cli {

enum ExitStatus : int {
  ok = 0,
  usage_error = 2,
  data_error = 3,
  numerical_error = 4,
};

// Runs the command line (without the program name). Results go to out,
// diagnostics to err. Never exits the process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixtest::cli
