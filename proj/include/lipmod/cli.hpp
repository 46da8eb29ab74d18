#pragma once

#include <iosfwd>

namespace lipmod::cli {

// Dispatches a subcommand and writes the JSON report to --out (stdout by
// default). Exit codes: 0 success, 1 a checked inequality failed, 2 input
// error, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lipmod::cli
