#ifndef SESSIONLINK_CLI_H_
#define SESSIONLINK_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace sessionlink {

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;  // config validation or input parsing
inline constexpr int kExitRuntime = 3;

// Relative --config paths not found in the working directory are looked up
// here.
inline constexpr const char* kConfigDirEnv = "SESSIONLINK_CONFIG_DIR";

// Runs the tool. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sessionlink

#endif  // SESSIONLINK_CLI_H_
