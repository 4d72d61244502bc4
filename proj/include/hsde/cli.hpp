#pragma once

#include <ostream>

namespace hsde {

/// Exit codes: 0 success, 2 config error, 3 analytic refusal, 4 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsde
