#pragma once

#include <ostream>

namespace kobayashi {

// Exit codes: 0 success, 2 bad input or violated precondition, 3 numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kobayashi
