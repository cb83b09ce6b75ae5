#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace urysohn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

/// Runs one command line. `args` excludes the program name. Results go to
/// files named by the flags (or `out` where a command allows it) and
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace urysohn::cli
