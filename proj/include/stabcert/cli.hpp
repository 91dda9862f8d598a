#ifndef STABCERT_CLI_HPP
#define STABCERT_CLI_HPP

#include <string>
#include <vector>

namespace stabcert::cli {

/// Exit codes: 0 success / forward invariant, 1 inconclusive, 2 falsified,
/// 64 usage error, 65 data or model error.
constexpr int kExitOk = 0;
constexpr int kExitInconclusive = 1;
constexpr int kExitFalsified = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

/// Runs the command line. argv[0] is the program name.
int run(const std::vector<std::string>& argv);
int run(int argc, const char* const* argv);

}  // namespace stabcert::cli

#endif
