#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsslab {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kStructuralMismatch = 3,
  kVerificationFailure = 4,
  kResourceLimit = 5,
};

/// Runs the command line (without the program name). Reports go to out,
/// diagnostics and warnings to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsslab
