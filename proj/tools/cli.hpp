#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biastol::cli {

/// Exit codes: 0 success, 1 computation error (structured JSON error on
/// `out`), 2 usage error (diagnostic on `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Routes the default logger to stderr at the level named by BIASTOL_LOG.
void configure_logging();

}  // namespace biastol::cli
