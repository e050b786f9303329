#pragma once
// The `lpmln` command line front end.

#include <iosfwd>
#include <string>
#include <vector>

namespace lpmln::cli {

enum ExitCode : int { Success = 0, UsageError = 1, InputError = 2, SemanticError = 3 };

/// Runs the tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lpmln::cli
