#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ncca {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

// args excludes the program name. Reports go to out, errors (as JSON) to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncca
