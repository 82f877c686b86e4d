#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spider {

// Entry point of the spider-query tool. `args` excludes the program name.
// Exit codes: 0 ok, 1 validation or operation failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spider
