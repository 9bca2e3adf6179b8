#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace graphrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // file and runtime errors
inline constexpr int kExitUsage = 2;

/// Runs one invocation. args excludes the program name.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace graphrank::cli
