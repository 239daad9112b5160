#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sl2pke::cli {

// Process exit codes; stable for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRejected = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitAttackFailed = 5;

/// Runs the command line `args` (args[0] is the program name). Report lines
/// go to `out`; machine-readable lines start with "RESULT: " and timing lines
/// with "time: ".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sl2pke::cli
