#ifndef ARCPARSE_TOOLS_COMMANDS_H_
#define ARCPARSE_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace arcparse::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// Runs `arcparse <args...>` (args exclude the program name). Regular output
// goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a file's contents.
std::string FileSha256(const std::string& path);

}  // namespace arcparse::cli

#endif  // ARCPARSE_TOOLS_COMMANDS_H_
