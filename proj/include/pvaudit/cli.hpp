#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pvaudit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 2 input or usage error, 1 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            bool color = false);

}  // namespace pvaudit
