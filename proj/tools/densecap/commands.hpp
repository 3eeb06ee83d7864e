#pragma once

namespace densecap::cli {

// Parses argv, runs one subcommand and returns the process exit code.
// Errors are reported on stderr as a single line:
//   densecap: error kind=<kind> code=<exit code> message="<text>"
int run(int argc, char** argv);

}  // namespace densecap::cli
