#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topo::cli {

// Runs one CLI invocation (args exclude the program name). Exit codes:
// 0 success, 1 verification or runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace topo::cli
