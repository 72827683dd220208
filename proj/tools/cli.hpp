#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rhetor::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// Runs one command line (without the program name). Everything goes to
// `out`/`err`, so tests can drive it in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rhetor::cli
