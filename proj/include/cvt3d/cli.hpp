#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvt3d::cli {

/// Exit codes: 0 success, 1 computation error, 2 usage or validation error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvt3d::cli
