#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace equichroma {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kTheoryViolation = 3;
inline constexpr int kResourceCap = 4;
}  // namespace exit_code

// Runs one CLI invocation. args[0] is the program name. Standard input is
// only read by subcommands given no --input file.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace equichroma
