// cli.hpp - Command-line front end shared by the executable and its tests

#pragma once

#include <iosfwd>

namespace nmspin::harness {

enum ExitCode : int { ExitSuccess = 0, ExitConfigError = 1, ExitNumericFailure = 2 };

/// Parses `argv`, runs the selected sweep, writes outputs and returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nmspin::harness
