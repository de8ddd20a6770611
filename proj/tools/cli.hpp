#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpreg::cli {

inline constexpr int kExitPrimal = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertificate = 2;
inline constexpr int kExitUsage = 64;

/// Runs the CLI on already-split arguments (without argv[0]). JSON-lines
/// reports go to `out`; usage and error messages go to `err`.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace lpreg::cli
