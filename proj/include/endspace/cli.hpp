#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace endspace {

/// The `endspace` command line. Reports go to `out` as JSON lines; returns 0
/// when every check passes, 1 on a failed check, 2 on usage or parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace endspace
