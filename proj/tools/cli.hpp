#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slowent::cli {

/// Exit codes: 0 success, 1 oracle mismatch or internal error, 2 usage error,
/// 3 precision or resource limit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slowent::cli
