#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace droneloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the command-line tool; `args` excludes the program name.
/// Subcommands: bounds, simulate, compare, paths.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace droneloc
