#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace toombound::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,       // bad arguments or I/O failure
  kParse = 2,       // malformed input file
  kValidation = 3,  // input parsed but is not a valid family/certificate/plan
  kNotFound = 4,    // certificate search inconclusive within the window
  kTruncated = 5,   // enumeration hit its budget
};

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or to the --out file / $TOOMBOUND_OUT_DIR), diagnostics to `err`;
/// nothing is written to the result destination unless the command succeeds
/// or reports truncation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toombound::cli
