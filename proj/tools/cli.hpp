#pragma once

#include <iosfwd>

namespace bisz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // flag, parse or parameter errors
inline constexpr int kExitNumeric = 3;  // truncation, evaluation or recovery failures

/// Entry point shared by the bisz binary and the tests. Output is written
/// only after the command succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bisz::cli
