#pragma once

// Command dispatch for the actpres tool. Results are written to `out` as one
// KEY<TAB>VALUE line per fact; diagnostics and errors go to `err` only. The
// returned exit code is a total function of the verdict for decision
// commands: 0 proved/success, 1 disproved, 2 undecided, 3 failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace actpres::cli {

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actpres::cli
