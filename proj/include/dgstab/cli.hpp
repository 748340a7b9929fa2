#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgstab {

inline constexpr int kExitCertified = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

/// Runs one command line (without the program name). JSON goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgstab
