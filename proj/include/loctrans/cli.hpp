#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace loctrans::cli {

inline constexpr const char* kReportFormat = "loctrans-report/1";

enum ExitCode { kOk = 0, kValidation = 2, kCap = 3 };

// args exclude the program name; the report goes to `out`, diagnostics to `err`
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loctrans::cli
