#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "strichartz/profiles.hpp"

namespace strichartz::cli {

enum ExitCode : int { kAffirmative = 0, kError = 1, kInconclusive = 2 };

/// "gaussian", "gaussian:width=2", "bump:center=0,radius=1". Without an
/// amplitude key the profile is scaled to unit L2 norm.
Profile parse_profile(std::string_view text);

/// "1e-1..1e-6" expands to every decade between the ends (inclusive);
/// anything else is a comma-separated list.
std::vector<double> parse_eps(std::string_view text);

/// Parses argv (without the program name), runs the subcommand and writes
/// the report to `out` or to --out. Diagnostics and timing go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strichartz::cli
