// Command-line front-end, separated from main() so tests can drive it with
// captured streams.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eswitch {

// args excludes the program name.  Returns the process exit code: 0 success,
// 1 input error, 2 internal invariant violation.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace eswitch
