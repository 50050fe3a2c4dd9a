#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlnclab::cli {

// Runs one CLI invocation. `args` excludes the program name.
// Exit codes: 0 success, 2 parse/config error, 3 enumeration budget exceeded,
// 1 any other failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlnclab::cli
