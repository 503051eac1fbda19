#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncalg {

/// Runs the ncalg command line on `args` (without the program name).
/// Returns 0 on success, 1 when a verification fails, 2 on usage or parse errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ncalg
