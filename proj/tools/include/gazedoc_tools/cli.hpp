#ifndef GAZEDOC_TOOLS_CLI_HPP_
#define GAZEDOC_TOOLS_CLI_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace gazedoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Parses argv-style arguments (without the program name) and runs one
// subcommand. Never throws; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gazedoc::cli

#endif  // GAZEDOC_TOOLS_CLI_HPP_
