#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nvsyn {

// Exit codes: 0 ok, 1 bad input or usage, 2 engine fault.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvsyn
