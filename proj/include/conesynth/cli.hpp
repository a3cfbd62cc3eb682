#pragma once

#include <iosfwd>
#include <string>

#include "conesynth/errors.hpp"

namespace conesynth::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kUnsupported = 3,
  kToleranceFailure = 4,
};

int exit_code_for(ErrorCode code);

// Full command-line entry point; writes reports to `out` (or --out files)
// and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conesynth::cli
