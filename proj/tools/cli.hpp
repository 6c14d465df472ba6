#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lndkit::cli {

inline constexpr const char* kVersion = "lndkit 0.1.0";

// Runs one command; args exclude the program name. Returns the exit status:
// 0 on a produced verdict, 1 on input errors, 2 on assumption-violation evidence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lndkit::cli
