#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frv {

// Exit codes of `frv verify` and `frv oracle`.
inline constexpr int kExitResistant = 0;
inline constexpr int kExitNotResistant = 1;
inline constexpr int kExitError = 2;

// Entry point of the command-line tool; args excludes the program name.
// Subcommands: verify, simulate, reduce, encode, oracle, gen, solve.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frv
