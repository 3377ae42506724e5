#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orbit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kParseError = 2;
inline constexpr int kShapeMismatch = 3;
inline constexpr int kDimensionHypothesis = 4;
inline constexpr int kEmptyDatabase = 5;
inline constexpr int kInvalidConfig = 6;

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbit::cli
