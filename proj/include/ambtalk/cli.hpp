#pragma once

#include <iosfwd>

namespace ambtalk {

// Exit codes of the ambtalk command.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitNoEquilibrium = 4,
  kExitReproduce = 5,
};

// Entry point of the ambtalk command. Reports go to `out` (or to --out),
// warnings and errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ambtalk
