#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rrdps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (`bounds`, `keyrate`, `simulate`, `verify`).
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Locale-independent shortest form with 12 significant digits.
std::string format_number(double v);

/// Packs bits MSB-first into lowercase hex, four bits per digit; the last digit is zero-padded.
std::string pack_bits_hex(const std::vector<unsigned char>& bits);

}  // namespace rrdps::cli
