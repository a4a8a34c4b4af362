#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptspec {

inline constexpr const char* kVersion = "0.3.0";

struct SuiteResult
{
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

inline const std::vector<std::string> kSuites = {"wronskian", "transforms", "classification",
                                                 "ptdomain", "oracle"};

/// Runs one named suite, or all of them when suite is empty.
std::vector<SuiteResult> run_verify(int n, const std::string& suite, bool inject_fault = false);

/// Parses an angle such as "0.3", "pi", "pi/2", "3pi/4" or "2*pi/3".
double parse_angle(const std::string& text);

/// Command-line entry point. Returns the process exit status
/// (0 success, 1 computation failure, 2 usage error).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ptspec
