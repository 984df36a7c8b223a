#pragma once

#include <ostream>

namespace snctrop::cli {

// Runs one command line. Exit codes: 0 success, 1 negative verdict under
// --strict (or a failed construction), 2 input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snctrop::cli
