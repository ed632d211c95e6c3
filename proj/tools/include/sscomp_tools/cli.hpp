#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sscomp::cli {

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kInvalidParameters = 2,
  kCapExceeded = 3,
  kReconstructionInfeasible = 4,
};

/// Runs one command line (without the program name). Records go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sscomp::cli
