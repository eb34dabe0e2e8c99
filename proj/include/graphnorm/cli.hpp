#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphnorm::cli {

// Exit codes: 0 success or consistent, 2 input error, 3 refutation or
// failed validation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitRefuted = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphnorm::cli
