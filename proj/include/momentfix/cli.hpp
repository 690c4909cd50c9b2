#ifndef MOMENTFIX_CLI_HPP
#define MOMENTFIX_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace momentfix::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,           // success / certified
  kRefuted = 1,
  kUsage = 2,
  kIoError = 3,
  kInconclusive = 4,
  kNumericalFault = 5,
};

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace momentfix::cli

#endif  // MOMENTFIX_CLI_HPP
