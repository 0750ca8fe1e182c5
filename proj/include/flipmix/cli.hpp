#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace flipmix::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 invalid input, 2 failed numerical check.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

/// Runs one subcommand. args[0] is the program name. CSV goes to --out if
/// given, otherwise to `out`; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace flipmix::cli
