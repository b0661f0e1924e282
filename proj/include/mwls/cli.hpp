#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwls {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// Entry point of the mwls command line tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mwls
