#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cts::io {

// Runs one CLI invocation (args exclude the program name). Exit status:
// 0 affirmative/valid, 1 negative with witness, 2 input or usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace cts::io
