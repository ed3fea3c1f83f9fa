#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfc::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one `dfc` invocation. `args` excludes the program name. Reports go
/// to `out` (or the --out file); diagnostics and the simulate summary go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfc::cli
