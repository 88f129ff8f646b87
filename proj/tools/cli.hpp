#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weylab::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

// args[0] is the program name. Reports go to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace weylab::cli
