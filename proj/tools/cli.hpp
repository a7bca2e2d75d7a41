#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace distlab::cli {

// Runs the command line with argv-style arguments (args[0] is the program
// name). Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace distlab::cli
