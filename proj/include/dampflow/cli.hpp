#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dampflow::cli {

/// Exit codes: 0 when every asserted check passes, 2 on a check failure,
/// 1 on a usage or configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dampflow::cli
