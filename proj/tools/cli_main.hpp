#pragma once

#include <string>
#include <vector>

namespace essclose {

/// Entry point behind the `essclose` binary, separated so tests can drive
/// commands in-process. Exit status: 0 success, 1 check failure, 2 input
/// error.
int run_cli(const std::vector<std::string>& args);

}  // namespace essclose
