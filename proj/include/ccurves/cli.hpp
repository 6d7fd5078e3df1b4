#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccurves::cli {

/// Exit status: 0 holds/pass, 1 fails (or degenerate), 2 usage, input or computational error.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace ccurves::cli
