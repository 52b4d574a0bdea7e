#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ortglab::cli {

// Exit codes: 0 success, 1 validation/user error, 2 internal/runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ortglab::cli
