#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qchannel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitPreconditionFailed = 3;

/// Runs one qchannel command.  `args` excludes the program name.  The JSON
/// report goes to `out` (or to --out), errors go to `err` as a one-line JSON
/// object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qchannel::cli
