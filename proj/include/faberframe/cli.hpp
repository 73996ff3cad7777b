#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace faberframe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;    // bad flags, config file, or inputs
inline constexpr int kExitContract = 3;  // an embedded bound failed
inline constexpr int kExitCapacity = 4;  // request exceeds built capacity

// Runs one subcommand; `args` excludes the program name. All artifacts are
// deterministic functions of the resolved configuration.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace faberframe::cli
