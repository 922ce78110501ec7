#pragma once

#include <ostream>

namespace iwasawa::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

/// Entry point of the iwasawa tool. The report goes to `out` (or the
/// configured output file); diagnostics and the human-readable summary go to
/// `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iwasawa::cli
