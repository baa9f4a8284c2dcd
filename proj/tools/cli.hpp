#ifndef EXPCERT_TOOLS_CLI_HPP
#define EXPCERT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace expcert::cli
{

enum ExitCode : int { ok = 0, failed = 1, usage = 2 };

// Runs the expcert command line with `args` (excluding the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace expcert::cli

#endif
