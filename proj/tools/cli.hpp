#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cabne::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a byte string.
[[nodiscard]] std::string sha256_hex(const std::string& bytes);

}  // namespace cabne::cli
