#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netcs {

/// Entry point of the command line tool. Returns 0 on success, 1 on parameter
/// errors (including unknown subcommands), 2 on numerical failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netcs
