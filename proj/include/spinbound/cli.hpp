#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spinbound::cli {

inline constexpr const char* kToolName = "spinbound";
inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitInfeasible = 3,
  kExitVerifyFailed = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to --out when given, otherwise to `out`;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinbound::cli
