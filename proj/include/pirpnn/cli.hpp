#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace pirpnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

/// Reads a flat `key = value` file (`#` starts a comment) into an ordered list of pairs.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Entry point behind the `pirpnn` executable. Subcommands: solve, region, bench, orders.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pirpnn::cli
