// cli.hpp - command-line front door. Subcommands load the JSON file
// formats, run the analyses and emit machine-parseable JSON on stdout or
// CSV tables on request. Exit codes: 0 success, 1 validation failure,
// 2 numerical failure, 64 usage error.

#pragma once

namespace berezin::cli {

int run(int argc, const char* const* argv);

}  // namespace berezin::cli
