#pragma once

#include <string>
#include <vector>

namespace impair {

inline constexpr const char* kToolVersion = "1.0.0";

// args[0] is the program name, as in argv. Exit codes: 0 success (or
// expectation met), 1 runtime failure or unmet expectation, 2 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace impair
