#pragma once

#include <string>
#include <vector>

namespace bsc {

// Command entry point used by the binary and the tests.
// Exit codes: 0 clean, 1 finding (witness / twist pattern / obstruction),
// 2 input error.
int run_command(const std::vector<std::string>& args, std::string& out, std::string& err);

}  // namespace bsc
