#pragma once

#include <iosfwd>

namespace flowlab::cli {

// Entry point behind the flowlab binary. Exit codes: 0 all selected checks
// passed, 1 a check failed, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flowlab::cli
