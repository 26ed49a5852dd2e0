#pragma once

#include <ostream>

namespace cmrs {

// Exit codes: decide uses 0 Exists, 3 NotExists, 2 Unknown; everything else
// uses 0 success, 1 usage / parse / verification failure, and construct
// refusals reuse 3 (provably infeasible) and 2 (outside implemented range).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmrs
