//==============================================================================
// cli.hpp
// Command-line entry point (shared between the binary and the tests).
//==============================================================================
#pragma once

namespace kakinuma {

// Runs the `kakinuma` command line.  Returns the process exit code:
//   0 success, 1 config error, 2 solver error, 3 stability/cavitation abort,
//   4 invariant (selftest) failure.
int run_cli(int argc, char** argv);

} // namespace kakinuma
