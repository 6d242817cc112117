#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crossrd::cli {

/// Exit codes: 0 success, 1 invalid input, 2 runtime or solver failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Help text of the top-level command ("") or one subcommand.
std::string help_text(const std::string& subcommand);

}  // namespace crossrd::cli
