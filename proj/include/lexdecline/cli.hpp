#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lexdecline {

// Runs one command line (without the program name). Returns 0 on success,
// 1 when the pipeline fails, 2 for usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexdecline
