#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace singtrace {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitNotConverged = 3,
  kExitCheckFailed = 4,
};

/// Runs `singtrace <args...>` (args exclude the program name). `env_tol` is
/// the default tolerance taken from the environment at startup.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            std::optional<double> env_tol = std::nullopt);

/// Parses SINGTRACE_TOL; nullopt when unset, throws on garbage.
std::optional<double> tolerance_from_env();

}  // namespace singtrace
