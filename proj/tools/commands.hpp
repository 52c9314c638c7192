#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitIo = 4;

// Entry point of the `idr` tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idr::cli
