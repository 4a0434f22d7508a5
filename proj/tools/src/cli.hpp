#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace runtrim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitDeferred = 3;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace runtrim::cli
