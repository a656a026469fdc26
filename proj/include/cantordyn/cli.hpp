#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdyn {

// exit codes: 0 success, 2 witness or refusal, 1 error
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefusal = 2;

// args exclude the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdyn
