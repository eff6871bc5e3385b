#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBackend = 3;

/// Entry point of the `acc` tool; args excludes the program name.
/// Subcommands: import, validate, annotate, score, pipeline, silver, report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acc::cli
