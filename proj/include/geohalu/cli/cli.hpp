#pragma once

#include <iosfwd>

namespace geohalu::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Parses argv, runs one subcommand and returns its exit code. Messages go
// to `out` and `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace geohalu::cli
