// The `sportscaster` command line: simulate, pair, train, igsl, parse,
// generate, sportscast and evaluate.

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace sportscaster::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace sportscaster::cli
