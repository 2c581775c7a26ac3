#ifndef RATMM_CLI_COMMANDS_HPP
#define RATMM_CLI_COMMANDS_HPP

#include <iosfwd>

namespace ratmm::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_not_converged = 2,
  exit_certificate_failed = 3,
};

/// Entry point of the `ratmm` executable. Documents go to `out` unless
/// --output is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ratmm::cli

#endif  // RATMM_CLI_COMMANDS_HPP
