#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,  // also: hessian scan found violations
  kExitUsage = 2,           // bad flag, method, dimension or input document
  kExitInfeasible = 3,
  kExitDegenerate = 4,      // degenerate or non-general-position input
  kExitIo = 5,
};

class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mwk::cli
