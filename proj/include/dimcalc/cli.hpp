#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dimcalc {

enum ExitStatus : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_eval_failed = 2,
  exit_usage = 3,
};

/// Runs the `dimcalc` command line. `args` excludes the program name.
/// Results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimcalc
