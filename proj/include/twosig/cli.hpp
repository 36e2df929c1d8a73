#pragma once

// The `twosig` command line. Exit codes: 0 success, 1 violation found,
// 2 usage or input error, 3 only inconclusive (bounded) outcomes.

#include <iosfwd>
#include <string>
#include <vector>

namespace twosig::cli {

enum Exit : int { kOk = 0, kViolation = 1, kUsage = 2, kUnknown = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twosig::cli
