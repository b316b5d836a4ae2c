#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmvpr {

/// Entry point shared by the mmvpr binary and the tests. args excludes the
/// program name. Returns 0 on success; on failure prints a single-line
/// "error: ..." to err and returns nonzero.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmvpr
