#pragma once

#include <string>
#include <vector>

namespace attnlab {

// Runs the attnlab command-line tool on args (program name excluded).
// Exit codes: 0 success, 1 usage/config/runtime errors, 2 failed theory
// checks (verify only).
int run_cli(std::vector<std::string> args);

}  // namespace attnlab
