#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geomds::cli {

/// Runs one CLI invocation (args exclude the program name) and returns the
/// process exit code: 0 ok, 2 I/O, 3 bad input data, 4 numerical
/// degeneracy, 5 solver failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace geomds::cli
