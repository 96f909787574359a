#ifndef PRZK_TOOLS_CLI_HPP
#define PRZK_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace przk::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kRuntime = 2,
    kIntegrity = 3,
};

// Environment variable naming the default campaign config for `simulate`.
inline constexpr const char* kConfigEnv = "PRZK_CONFIG";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace przk::cli

#endif
