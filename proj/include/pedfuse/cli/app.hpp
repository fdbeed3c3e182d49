#pragma once

namespace pedfuse::cli {

/// The command-line entry point behind main(). Dispatches the generate /
/// train / evaluate / gradcheck / plot / experiment subcommands and maps
/// error classes onto exit codes: 0 success, 2 usage, 3 bad data or contract
/// violation, 4 numeric failure, 5 I/O failure.
int run(int argc, const char* const* argv);

}  // namespace pedfuse::cli
