#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mixvol::cli {

/// Exit status: 0 success, 2 invalid input or usage, 1 internal fault.
/// `args` excludes the program name. One JSON report goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixvol::cli
